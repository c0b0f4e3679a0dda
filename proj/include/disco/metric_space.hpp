#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "disco/error.hpp"

namespace disco {

using PointId = std::uint32_t;

/// Additive slack allowed on the triangle inequality when a matrix is
/// validated. Generator formulas involve square roots.
inline constexpr double kTriangleTolerance = 1e-9;

/// A validated finite metric space. Immutable after construction.
///
/// Distances are stored row-major in a dense n*n buffer. `resolution()` is
/// the sample resolution h: the largest nearest-neighbour gap, which is the
/// unit every scale-sensitive tolerance is expressed in.
class FiniteMetricSpace {
public:
    /// Validates and takes ownership. `dist` must be n*n, row-major.
    FiniteMetricSpace(std::size_t n, std::vector<double> dist, std::vector<std::string> labels = {},
                      nlohmann::json meta = nlohmann::json::object());

    std::size_t size() const noexcept { return n_; }
    double operator()(PointId i, PointId j) const noexcept { return dist_[i * n_ + j]; }
    double distance(PointId i, PointId j) const noexcept { return dist_[i * n_ + j]; }
    std::span<const double> row(PointId i) const noexcept { return {dist_.data() + i * n_, n_}; }

    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const nlohmann::json& meta() const noexcept { return meta_; }

    double diameter() const noexcept { return diameter_; }
    double resolution() const noexcept { return resolution_; }

private:
    std::size_t n_;
    std::vector<double> dist_;
    std::vector<std::string> labels_;
    nlohmann::json meta_;
    double diameter_ = 0.0;
    double resolution_ = 0.0;
};

// Construction -------------------------------------------------------------

/// Throws AsymmetricMatrix, TriangleViolation, NegativeEntry, DuplicatePoint,
/// or NonSquareMatrix.
FiniteMetricSpace from_distance_matrix(const std::vector<std::vector<double>>& matrix,
                                       std::vector<std::string> labels = {});

struct WeightedEdge {
    std::size_t u;
    std::size_t v;
    double weight;
};

/// Subdivides every edge into ceil(weight/spacing) equal segments and takes
/// the shortest-path metric of the subdivided graph. Parallel edges and
/// loops are allowed.
FiniteMetricSpace from_weighted_graph(std::size_t vertex_count, const std::vector<WeightedEdge>& edges,
                                      double subdivision_spacing);

FiniteMetricSpace sample_circle(double circumference, std::size_t n);

/// nx*ny grid on the flat torus with side lengths 3a and 3b.
FiniteMetricSpace sample_flat_torus(double a, double b, std::size_t nx, std::size_t ny);

/// Two vertices joined by `edges` parallel edges of the given length.
FiniteMetricSpace sample_multiedge(std::size_t edges, double length, double spacing);

/// 1-skeleton of the regular simplex on `vertices` vertices.
FiniteMetricSpace sample_simplex_skeleton(std::size_t vertices, double edge_length, double spacing);

/// A segment of the given length, subdivided.
FiniteMetricSpace sample_path(double length, double spacing);

// Queries ------------------------------------------------------------------

inline double diameter(const FiniteMetricSpace& space) { return space.diameter(); }

// Auto runs the exact search when the target set fits the threshold and
// falls back to the greedy cover otherwise.
enum class CoverMode { Exact, Greedy, Auto };

inline constexpr std::size_t kDefaultExactCoverThreshold = 64;

struct CoveringNumberResult {
    double s = 0.0;
    std::size_t count = 0;
    std::vector<PointId> centers;
    bool exact = false;
};

/// Minimum number of open s-balls (d < s) covering the space.
CoveringNumberResult covering_number(const FiniteMetricSpace& space, double s, CoverMode mode,
                                     std::size_t exact_threshold = kDefaultExactCoverThreshold);

/// Open s-balls needed to cover the closed r-ball around `base`. Centers may
/// be any point of the space.
CoveringNumberResult covering_number_in_ball(const FiniteMetricSpace& space, PointId base, double r,
                                             double s, CoverMode mode,
                                             std::size_t exact_threshold = kDefaultExactCoverThreshold);

struct Midpoint {
    PointId point;
    /// max(d(i,m), d(m,j)) - d(i,j)/2
    double deviation;
};

/// Point minimising max(d(i,m), d(m,j)); smallest index on ties.
/// Throws NoMidpointWithinTolerance when the best deviation exceeds tol.
Midpoint approx_midpoint(const FiniteMetricSpace& space, PointId i, PointId j, double tol);

// File formats ---------------------------------------------------------------

/// n rows of n comma-separated decimals, optional first row of labels.
FiniteMetricSpace read_distance_csv(std::istream& in);
FiniteMetricSpace read_distance_csv_file(const std::string& path);
void write_distance_csv(std::ostream& out, const FiniteMetricSpace& space);

struct EdgeList {
    std::size_t vertex_count = 0;
    std::vector<WeightedEdge> edges;
};

/// One `i j w` triple per line; `#` starts a comment.
EdgeList read_edge_list(std::istream& in);

}  // namespace disco
