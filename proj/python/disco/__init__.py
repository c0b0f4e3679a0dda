"""Critical values and epsilon-homotopy of finite metric spaces.

Reports are returned as dicts with the same layout as the ``disco`` CLI's
JSON output.
"""

from ._disco import (
    DiscoError,
    MetricSpace,
    bounds,
    count_short_classes,
    covering_number,
    decide_null,
    from_distance_matrix,
    from_weighted_graph,
    generators,
    read_distance_csv,
    sample_circle,
    sample_flat_torus,
    sample_multiedge,
    sample_path,
    sample_simplex_skeleton,
    spectrum,
    verify_homotopy,
)

__all__ = [
    "DiscoError",
    "MetricSpace",
    "bounds",
    "count_short_classes",
    "covering_number",
    "decide_null",
    "from_distance_matrix",
    "from_weighted_graph",
    "generators",
    "read_distance_csv",
    "sample_circle",
    "sample_flat_torus",
    "sample_multiedge",
    "sample_path",
    "sample_simplex_skeleton",
    "spectrum",
    "verify_homotopy",
]
