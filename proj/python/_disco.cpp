#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "disco/bounds.hpp"
#include "disco/decider.hpp"
#include "disco/error.hpp"
#include "disco/io.hpp"
#include "disco/metric_space.hpp"
#include "disco/spectrum.hpp"

namespace py = pybind11;
using disco::FiniteMetricSpace;
using disco::json;

namespace {

// Reports cross the boundary as plain dicts; going through the JSON text
// keeps the Python view identical to the CLI output.
py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

disco::Chain to_chain(const std::vector<disco::PointId>& points, const FiniteMetricSpace& space) {
    for (auto p : points)
        if (p >= space.size())
            throw disco::Error("MalformedInput", "point " + std::to_string(p) + " is out of range");
    disco::Chain c;
    c.points = points;
    return c;
}

disco::SpectrumReport run_spectrum(const FiniteMetricSpace& space, double eps_min, double eps_max, double tolerance,
                                   bool clamp) {
    disco::SpectrumOptions o;
    o.eps_max = eps_max;
    o.tolerance = tolerance;
    o.resolution = clamp ? disco::ResolutionPolicy::Clamp : disco::ResolutionPolicy::Error;
    return disco::compute_spectrum(space, eps_min, o);
}

}  // namespace

PYBIND11_MODULE(_disco, m) {
    m.doc() = "Discrete critical values and epsilon-homotopy of finite metric spaces";

    // Subclasses ValueError; instances carry the error kind as `.kind`.
    py::exception<disco::Error>(m, "DiscoError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const disco::Error& e) {
            py::object type = py::module_::import("disco._disco").attr("DiscoError");
            py::object err = type(e.kind() + ": " + e.what());
            err.attr("kind") = e.kind();
            PyErr_SetObject(type.ptr(), err.ptr());
        }
    });

    py::class_<FiniteMetricSpace>(m, "MetricSpace")
        .def("__len__", &FiniteMetricSpace::size)
        .def_property_readonly("size", &FiniteMetricSpace::size)
        .def_property_readonly("diameter", &FiniteMetricSpace::diameter)
        .def_property_readonly("resolution", &FiniteMetricSpace::resolution)
        .def_property_readonly("labels", &FiniteMetricSpace::labels)
        .def_property_readonly("meta", [](const FiniteMetricSpace& s) { return to_py(s.meta()); })
        .def("distance",
             [](const FiniteMetricSpace& s, disco::PointId i, disco::PointId j) {
                 if (i >= s.size() || j >= s.size()) throw py::index_error("point out of range");
                 return s(i, j);
             })
        .def("matrix", [](const FiniteMetricSpace& s) {
            std::vector<std::vector<double>> rows(s.size());
            for (disco::PointId i = 0; i < s.size(); ++i) rows[i].assign(s.row(i).begin(), s.row(i).end());
            return rows;
        })
        .def("__repr__", [](const FiniteMetricSpace& s) {
            std::ostringstream out;
            out << "<MetricSpace n=" << s.size() << " diameter=" << s.diameter() << " h=" << s.resolution() << ">";
            return out.str();
        });

    m.def("from_distance_matrix", &disco::from_distance_matrix, py::arg("matrix"),
          py::arg("labels") = std::vector<std::string>{});
    m.def(
        "from_weighted_graph",
        [](std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges, double spacing) {
            std::vector<disco::WeightedEdge> es;
            for (const auto& [u, v, w] : edges) es.push_back({u, v, w});
            return disco::from_weighted_graph(n, es, spacing);
        },
        py::arg("vertex_count"), py::arg("edges"), py::arg("spacing"));
    m.def("read_distance_csv", &disco::read_distance_csv_file, py::arg("path"));
    m.def("sample_circle", &disco::sample_circle, py::arg("circumference"), py::arg("n"));
    m.def("sample_flat_torus", &disco::sample_flat_torus, py::arg("a"), py::arg("b"), py::arg("nx"), py::arg("ny"));
    m.def("sample_multiedge", &disco::sample_multiedge, py::arg("edges"), py::arg("length"), py::arg("spacing"));
    m.def("sample_simplex_skeleton", &disco::sample_simplex_skeleton, py::arg("vertices"), py::arg("edge_length"),
          py::arg("spacing"));
    m.def("sample_path", &disco::sample_path, py::arg("length"), py::arg("spacing"));

    m.def(
        "spectrum",
        [](const FiniteMetricSpace& s, double eps_min, double eps_max, double tolerance, bool clamp) {
            disco::SpectrumReport r;
            {
                py::gil_scoped_release release;
                r = run_spectrum(s, eps_min, eps_max, tolerance, clamp);
            }
            return to_py(disco::to_json(r));
        },
        py::arg("space"), py::arg("eps_min"), py::arg("eps_max") = 0.0, py::arg("tolerance") = 0.0,
        py::arg("clamp") = false);

    m.def(
        "decide_null",
        [](const FiniteMetricSpace& s, const std::vector<disco::PointId>& loop, double eps) {
            const auto c = to_chain(loop, s);
            return to_py(disco::to_json(disco::decide_null(c, s, eps)));
        },
        py::arg("space"), py::arg("loop"), py::arg("eps"));

    m.def(
        "verify_homotopy",
        [](const FiniteMetricSpace& s, py::object certificate) {
            const json j = json::parse(py::module_::import("json").attr("dumps")(certificate).cast<std::string>());
            return disco::verify_homotopy(disco::homotopy_from_json(j), s).ok;
        },
        py::arg("space"), py::arg("certificate"));

    m.def(
        "generators",
        [](const FiniteMetricSpace& s, double eps) {
            const disco::NullDecider d(s, eps);
            json out;
            out["homology"] = disco::to_json(d.homology().summary());
            out["presentation"] = disco::to_json(d.presentation());
            const auto* sp = d.simplified();
            out["simplified"] = sp ? disco::to_json(*sp) : json(nullptr);
            return to_py(out);
        },
        py::arg("space"), py::arg("eps"));

    m.def(
        "count_short_classes",
        [](const FiniteMetricSpace& s, double eps, double L) {
            return to_py(disco::to_json(disco::count_short_classes(s, eps, L)));
        },
        py::arg("space"), py::arg("eps"), py::arg("length"));

    m.def(
        "covering_number",
        [](const FiniteMetricSpace& s, double radius) {
            return disco::covering_number(s, radius, disco::CoverMode::Auto).count;
        },
        py::arg("space"), py::arg("radius"));

    m.def(
        "bounds",
        [](const FiniteMetricSpace& s, double eps_min, bool clamp, double eps, std::vector<double> lengths) {
            const auto r = run_spectrum(s, eps_min, 0.0, 0.0, clamp);
            disco::BoundsConfig cfg;
            cfg.eps = eps;
            if (!lengths.empty()) cfg.lengths = std::move(lengths);
            json out = json::array();
            for (const auto& b : disco::evaluate_bounds(s, r, cfg)) out.push_back(disco::to_json(b));
            return to_py(out);
        },
        py::arg("space"), py::arg("eps_min"), py::arg("clamp") = false, py::arg("eps") = 0.0,
        py::arg("lengths") = std::vector<double>{});
}
