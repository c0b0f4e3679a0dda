#include "disco/metric_space.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>

#include "disco/format.hpp"

namespace disco {

namespace {

void validate(std::size_t n, const std::vector<double>& d) {
    if (d.size() != n * n) throw Error("NonSquareMatrix", "distance buffer is not n*n");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = d[i * n + j];
            if (!std::isfinite(v)) throw Error("NonFiniteEntry", "non-finite distance entry");
            if (v < 0.0) {
                throw Error("NegativeEntry", "negative distance at (" + std::to_string(i) + "," +
                                                 std::to_string(j) + ")");
            }
            if (i == j && v != 0.0) throw Error("NonzeroDiagonal", "nonzero diagonal entry");
            if (i != j && v == 0.0) {
                throw Error("DuplicatePoint", "points " + std::to_string(i) + " and " +
                                                  std::to_string(j) + " coincide");
            }
            if (std::abs(v - d[j * n + i]) > kTriangleTolerance) {
                throw Error("AsymmetricMatrix", "d(" + std::to_string(i) + "," + std::to_string(j) +
                                                    ") differs from its transpose");
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            const double ik = d[i * n + k];
            for (std::size_t j = 0; j < n; ++j) {
                const double excess = ik - (d[i * n + j] + d[j * n + k]);
                if (excess > kTriangleTolerance) throw TriangleViolation(i, j, k, excess);
            }
        }
    }
}

}  // namespace

FiniteMetricSpace::FiniteMetricSpace(std::size_t n, std::vector<double> dist,
                                     std::vector<std::string> labels, nlohmann::json meta)
    : n_(n), dist_(std::move(dist)), labels_(std::move(labels)), meta_(std::move(meta)) {
    if (n_ == 0) throw Error("EmptySpace", "a metric space needs at least one point");
    validate(n_, dist_);
    // Store an exactly symmetric matrix.
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j) dist_[j * n_ + i] = dist_[i * n_ + j];
    if (labels_.empty()) {
        labels_.reserve(n_);
        for (std::size_t i = 0; i < n_; ++i) labels_.push_back(std::to_string(i));
    } else if (labels_.size() != n_) {
        throw Error("LabelCountMismatch", "label count differs from point count");
    }
    for (std::size_t i = 0; i < n_; ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n_; ++j) {
            const double v = dist_[i * n_ + j];
            diameter_ = std::max(diameter_, v);
            if (j != i) nearest = std::min(nearest, v);
        }
        if (n_ > 1) resolution_ = std::max(resolution_, nearest);
    }
}

FiniteMetricSpace from_distance_matrix(const std::vector<std::vector<double>>& matrix,
                                       std::vector<std::string> labels) {
    const std::size_t n = matrix.size();
    std::vector<double> flat;
    flat.reserve(n * n);
    for (const auto& row : matrix) {
        if (row.size() != n) throw Error("NonSquareMatrix", "distance matrix is not square");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    nlohmann::json meta = {{"source", "matrix"}};
    return FiniteMetricSpace(n, std::move(flat), std::move(labels), std::move(meta));
}

// Generators ---------------------------------------------------------------

FiniteMetricSpace from_weighted_graph(std::size_t vertex_count, const std::vector<WeightedEdge>& edges,
                                      double subdivision_spacing) {
    if (!(subdivision_spacing > 0.0)) throw Error("NonpositiveSpacing", "spacing must be positive");
    if (vertex_count == 0) throw Error("EmptySpace", "graph has no vertices");

    // Subdivided graph: original vertices first, then interior points edge by edge.
    std::vector<std::string> labels;
    for (std::size_t v = 0; v < vertex_count; ++v) labels.push_back("v" + std::to_string(v));
    std::vector<std::vector<std::pair<std::size_t, double>>> adj(vertex_count);
    auto add_node = [&](std::string label) {
        labels.push_back(std::move(label));
        adj.emplace_back();
        return adj.size() - 1;
    };
    auto link = [&](std::size_t a, std::size_t b, double w) {
        adj[a].emplace_back(b, w);
        adj[b].emplace_back(a, w);
    };
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto& [u, v, w] = edges[e];
        if (u >= vertex_count || v >= vertex_count)
            throw Error("BadVertex", "edge endpoint out of range");
        if (!(w > 0.0)) throw Error("NonpositiveWeight", "edge weights must be positive");
        const auto segments = static_cast<std::size_t>(std::ceil(w / subdivision_spacing - 1e-12));
        const std::size_t parts = std::max<std::size_t>(segments, 1);
        const double step = w / static_cast<double>(parts);
        std::size_t prev = u;
        for (std::size_t s = 1; s < parts; ++s) {
            const std::size_t node = add_node("e" + std::to_string(e) + "_" + std::to_string(s));
            link(prev, node, step);
            prev = node;
        }
        link(prev, v, step);
    }

    const std::size_t n = adj.size();
    std::vector<double> dist(n * n, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::size_t>;
    for (std::size_t src = 0; src < n; ++src) {
        double* row = dist.data() + src * n;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        row[src] = 0.0;
        pq.emplace(0.0, src);
        while (!pq.empty()) {
            auto [du, u] = pq.top();
            pq.pop();
            if (du > row[u]) continue;
            for (auto [v, w] : adj[u]) {
                if (du + w < row[v]) {
                    row[v] = du + w;
                    pq.emplace(row[v], v);
                }
            }
        }
        for (std::size_t v = 0; v < n; ++v)
            if (!std::isfinite(row[v])) throw Error("DisconnectedGraph", "graph is not connected");
    }
    nlohmann::json meta = {{"generator", "graph"},
                           {"vertices", vertex_count},
                           {"edges", edges.size()},
                           {"spacing", subdivision_spacing}};
    return FiniteMetricSpace(n, std::move(dist), std::move(labels), std::move(meta));
}

FiniteMetricSpace sample_circle(double circumference, std::size_t n) {
    if (n < 3) throw Error("TooFewPoints", "a circle sample needs at least 3 points");
    if (!(circumference > 0.0)) throw Error("BadDimensions", "circumference must be positive");
    const double step = circumference / static_cast<double>(n);
    std::vector<double> dist(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t gap = i > j ? i - j : j - i;
            dist[i * n + j] = static_cast<double>(std::min(gap, n - gap)) * step;
        }
    }
    nlohmann::json meta = {{"generator", "circle"}, {"circumference", circumference}, {"n", n}};
    return FiniteMetricSpace(n, std::move(dist), {}, std::move(meta));
}

FiniteMetricSpace sample_flat_torus(double a, double b, std::size_t nx, std::size_t ny) {
    if (!(a > 0.0) || !(a <= b)) throw Error("BadDimensions", "torus needs 0 < 3a <= 3b");
    if (nx < 2 || ny < 2) throw Error("BadDimensions", "torus grid needs at least 2x2 points");
    const double wx = 3.0 * a;
    const double wy = 3.0 * b;
    const std::size_t n = nx * ny;
    std::vector<double> dist(n * n);
    auto wrapped = [](std::size_t p, std::size_t q, std::size_t count, double width) {
        const std::size_t gap = p > q ? p - q : q - p;
        return static_cast<double>(std::min(gap, count - gap)) * width / static_cast<double>(count);
    };
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t p = 0; p < n; ++p) {
        labels.push_back(std::to_string(p % nx) + ":" + std::to_string(p / nx));
        for (std::size_t q = 0; q < n; ++q) {
            const double dx = wrapped(p % nx, q % nx, nx, wx);
            const double dy = wrapped(p / nx, q / nx, ny, wy);
            dist[p * n + q] = std::sqrt(dx * dx + dy * dy);
        }
    }
    nlohmann::json meta = {{"generator", "torus"}, {"a", a}, {"b", b}, {"nx", nx}, {"ny", ny}};
    return FiniteMetricSpace(n, std::move(dist), std::move(labels), std::move(meta));
}

namespace {

FiniteMetricSpace with_meta(FiniteMetricSpace space, nlohmann::json meta) {
    const std::size_t n = space.size();
    std::vector<double> dist(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = space(i, j);
    return FiniteMetricSpace(n, std::move(dist), space.labels(), std::move(meta));
}

}  // namespace

FiniteMetricSpace sample_multiedge(std::size_t edges, double length, double spacing) {
    if (edges == 0) throw Error("BadDimensions", "need at least one edge");
    std::vector<WeightedEdge> list(edges, WeightedEdge{0, 1, length});
    return with_meta(from_weighted_graph(2, list, spacing), {{"generator", "multiedge"},
                                                             {"edges", edges},
                                                             {"length", length},
                                                             {"spacing", spacing}});
}

FiniteMetricSpace sample_simplex_skeleton(std::size_t vertices, double edge_length, double spacing) {
    if (vertices < 2) throw Error("BadDimensions", "a simplex needs at least 2 vertices");
    std::vector<WeightedEdge> list;
    for (std::size_t i = 0; i < vertices; ++i)
        for (std::size_t j = i + 1; j < vertices; ++j) list.push_back({i, j, edge_length});
    return with_meta(from_weighted_graph(vertices, list, spacing), {{"generator", "simplex"},
                                                                    {"vertices", vertices},
                                                                    {"length", edge_length},
                                                                    {"spacing", spacing}});
}

FiniteMetricSpace sample_path(double length, double spacing) {
    return with_meta(from_weighted_graph(2, {{0, 1, length}}, spacing),
                     {{"generator", "path"}, {"length", length}, {"spacing", spacing}});
}

// Covering numbers -----------------------------------------------------------

namespace {

struct CoverProblem {
    std::vector<PointId> targets;                 // points that must be covered
    std::vector<std::vector<std::size_t>> balls;  // per center: covered target slots
};

std::vector<PointId> greedy_cover(const CoverProblem& problem) {
    const std::size_t m = problem.targets.size();
    std::vector<char> covered(m, 0);
    std::size_t remaining = m;
    std::vector<PointId> centers;
    while (remaining > 0) {
        std::size_t best = 0;
        std::size_t best_gain = 0;
        for (std::size_t c = 0; c < problem.balls.size(); ++c) {
            std::size_t gain = 0;
            for (auto t : problem.balls[c]) gain += covered[t] ? 0 : 1;
            if (gain > best_gain) {
                best_gain = gain;
                best = c;
            }
        }
        centers.push_back(static_cast<PointId>(best));
        for (auto t : problem.balls[best]) {
            if (!covered[t]) {
                covered[t] = 1;
                --remaining;
            }
        }
    }
    std::sort(centers.begin(), centers.end());
    return centers;
}

// Branch and bound over bitmasks (targets <= 64). Branches on the uncovered
// target with the fewest candidate balls.
class ExactCover {
public:
    explicit ExactCover(const CoverProblem& problem) : m_(problem.targets.size()) {
        masks_.resize(problem.balls.size(), 0);
        for (std::size_t c = 0; c < problem.balls.size(); ++c)
            for (auto t : problem.balls[c]) masks_[c] |= std::uint64_t{1} << t;
        covering_.resize(m_);
        for (std::size_t c = 0; c < masks_.size(); ++c)
            for (std::size_t t = 0; t < m_; ++t)
                if (masks_[c] >> t & 1U) covering_[t].push_back(c);
        full_ = m_ == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << m_) - 1);
    }

    std::vector<PointId> solve(std::vector<PointId> upper) {
        best_ = std::move(upper);
        std::vector<PointId> current;
        search(0, current);
        std::sort(best_.begin(), best_.end());
        return best_;
    }

private:
    void search(std::uint64_t covered, std::vector<PointId>& current) {
        if (covered == full_) {
            if (current.size() < best_.size()) best_ = current;
            return;
        }
        if (current.size() + 1 >= best_.size()) return;
        std::size_t pick = m_;
        std::size_t fewest = std::numeric_limits<std::size_t>::max();
        for (std::size_t t = 0; t < m_; ++t) {
            if (covered >> t & 1U) continue;
            if (covering_[t].size() < fewest) {
                fewest = covering_[t].size();
                pick = t;
            }
        }
        // Lower bound: uncovered count over the largest ball's fresh coverage.
        const std::uint64_t open = full_ & ~covered;
        int max_gain = 0;
        for (auto mask : masks_) max_gain = std::max(max_gain, std::popcount(mask & open));
        const int need = (std::popcount(open) + max_gain - 1) / max_gain;
        if (current.size() + static_cast<std::size_t>(need) >= best_.size()) return;
        for (auto c : covering_[pick]) {
            current.push_back(static_cast<PointId>(c));
            search(covered | masks_[c], current);
            current.pop_back();
        }
    }

    std::size_t m_;
    std::vector<std::uint64_t> masks_;
    std::vector<std::vector<std::size_t>> covering_;
    std::uint64_t full_ = 0;
    std::vector<PointId> best_;
};

CoveringNumberResult solve_cover(const FiniteMetricSpace& space, std::vector<PointId> targets, double s,
                                 CoverMode mode, std::size_t exact_threshold) {
    if (!(s > 0.0)) throw Error("NonpositiveRadius", "cover radius must be positive");
    CoverProblem problem;
    problem.targets = std::move(targets);
    problem.balls.resize(space.size());
    for (PointId c = 0; c < space.size(); ++c)
        for (std::size_t t = 0; t < problem.targets.size(); ++t)
            if (space(c, problem.targets[t]) < s) problem.balls[c].push_back(t);

    CoveringNumberResult result;
    result.s = s;
    result.centers = greedy_cover(problem);
    const std::size_t m = problem.targets.size();
    const std::size_t limit = std::min<std::size_t>(exact_threshold, 64);
    if (mode == CoverMode::Auto) mode = m <= limit ? CoverMode::Exact : CoverMode::Greedy;
    if (mode == CoverMode::Exact) {
        if (m > limit) {
            throw Error("ExactSearchTooLarge", "exact cover requested for " + std::to_string(m) +
                                                   " points; threshold is " + std::to_string(limit));
        }
        result.centers = ExactCover(problem).solve(result.centers);
        result.exact = true;
    }
    result.count = result.centers.size();
    return result;
}

}  // namespace

CoveringNumberResult covering_number(const FiniteMetricSpace& space, double s, CoverMode mode,
                                     std::size_t exact_threshold) {
    std::vector<PointId> all(space.size());
    std::iota(all.begin(), all.end(), PointId{0});
    return solve_cover(space, std::move(all), s, mode, exact_threshold);
}

CoveringNumberResult covering_number_in_ball(const FiniteMetricSpace& space, PointId base, double r,
                                             double s, CoverMode mode, std::size_t exact_threshold) {
    std::vector<PointId> inside;
    for (PointId p = 0; p < space.size(); ++p)
        if (space(base, p) <= r) inside.push_back(p);
    return solve_cover(space, std::move(inside), s, mode, exact_threshold);
}

Midpoint approx_midpoint(const FiniteMetricSpace& space, PointId i, PointId j, double tol) {
    if (tol < 0.0) throw Error("NegativeTolerance", "midpoint tolerance must be nonnegative");
    if (i == j) return {i, 0.0};
    const double half = space(i, j) / 2.0;
    PointId best = 0;
    double best_side = std::numeric_limits<double>::infinity();
    for (PointId m = 0; m < space.size(); ++m) {
        const double side = std::max(space(i, m), space(m, j));
        if (side < best_side) {
            best_side = side;
            best = m;
        }
    }
    const double deviation = best_side - half;
    if (deviation > tol + 1e-12) throw NoMidpointWithinTolerance(deviation);
    return {best, std::max(deviation, 0.0)};
}

// File formats ---------------------------------------------------------------

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        const auto first = cell.find_first_not_of(" \t\r");
        const auto last = cell.find_last_not_of(" \t\r");
        cells.push_back(first == std::string::npos ? "" : cell.substr(first, last - first + 1));
    }
    return cells;
}

bool parse_double(const std::string& text, double& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

}  // namespace

FiniteMetricSpace read_distance_csv(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        rows.push_back(split_csv(line));
    }
    if (rows.empty()) throw Error("MalformedInput", "empty distance matrix");
    std::vector<std::string> labels;
    // A header is either non-numeric or the extra row of an (n+1) x n table.
    double probe = 0.0;
    if (!parse_double(rows.front().front(), probe) || rows.size() == rows.front().size() + 1) {
        labels = rows.front();
        rows.erase(rows.begin());
    }
    std::vector<std::vector<double>> matrix;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::vector<double> values;
        for (const auto& cell : rows[r]) {
            double v = 0.0;
            if (!parse_double(cell, v))
                throw Error("MalformedInput", "row " + std::to_string(r) + ": bad number '" + cell + "'");
            values.push_back(v);
        }
        matrix.push_back(std::move(values));
    }
    auto space = from_distance_matrix(matrix, std::move(labels));
    return space;
}

FiniteMetricSpace read_distance_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("MalformedInput", "cannot open " + path);
    auto parsed = read_distance_csv(in);
    const std::size_t n = parsed.size();
    std::vector<double> dist(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = parsed(i, j);
    std::ifstream again(path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(again)), std::istreambuf_iterator<char>());
    nlohmann::json meta = {{"source", "csv"}, {"path", path}, {"digest", fnv1a_hex(bytes)}};
    return FiniteMetricSpace(n, std::move(dist), parsed.labels(), std::move(meta));
}

void write_distance_csv(std::ostream& out, const FiniteMetricSpace& space) {
    const std::size_t n = space.size();
    for (std::size_t i = 0; i < n; ++i) {
        out << space.labels()[i] << (i + 1 < n ? "," : "\n");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out << format_double(space(i, j)) << (j + 1 < n ? "," : "\n");
        }
    }
}

EdgeList read_edge_list(std::istream& in) {
    EdgeList list;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        long long u = 0;
        long long v = 0;
        double w = 0.0;
        if (!(ss >> u)) continue;
        if (!(ss >> v >> w) || u < 0 || v < 0)
            throw Error("MalformedInput", "edge list line " + std::to_string(line_no));
        list.edges.push_back({static_cast<std::size_t>(u), static_cast<std::size_t>(v), w});
        list.vertex_count = std::max<std::size_t>(list.vertex_count, std::max(u, v) + 1);
    }
    if (list.edges.empty()) throw Error("MalformedInput", "edge list is empty");
    return list;
}

}  // namespace disco
