#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>

#include "disco/decider.hpp"
#include "disco/error.hpp"

namespace disco {

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

// A triangle seen from one corner u: neighbours v and w of u (as indices
// into adjacency[u]) and the index of w in adjacency[v].
struct Corner {
    std::uint32_t kv;
    std::uint32_t kw;
    std::uint32_t kvw;
};

class Enumerator {
public:
    Enumerator(const Chassis& c, std::size_t budget) : c_(c), budget_(budget) {
        const std::size_t m = c.vertex_count();
        corners_.resize(m);
        back_.resize(m);
        for (VertexId u = 0; u < m; ++u) {
            const auto& adj = c.adjacency[u];
            back_[u].resize(adj.size());
            for (std::uint32_t k = 0; k < adj.size(); ++k) back_[u][k] = index_of(adj[k].first, u);
            for (std::uint32_t kv = 0; kv < adj.size(); ++kv)
                for (std::uint32_t kw = 0; kw < adj.size(); ++kw) {
                    if (kv == kw) continue;
                    const std::uint32_t kvw = index_of(adj[kv].first, adj[kw].first);
                    if (kvw != kNone) corners_[u].push_back({kv, kw, kvw});
                }
        }
    }

    std::uint32_t make_node(VertexId v, double dist, std::uint32_t parent) {
        const auto id = static_cast<std::uint32_t>(proj_.size());
        proj_.push_back(v);
        dist_.push_back(dist);
        parent_.push_back(parent == kNone ? id : parent);
        rep_.push_back(id);
        lifts_.emplace_back(c_.adjacency[v].size(), kNone);
        processed_.push_back(0);
        pq_.emplace(dist, id);
        ++live_;
        if (live_ > budget_) truncated_ = true;
        return id;
    }

    std::uint32_t find(std::uint32_t x) {
        while (rep_[x] != x) {
            rep_[x] = rep_[rep_[x]];
            x = rep_[x];
        }
        return x;
    }

    void run(VertexId base, double inner, double limit, double watch) {
        inner_ = inner;
        make_node(base, 0.0, kNone);
        while (!pq_.empty() && !truncated_) {
            auto [d, x] = pq_.top();
            pq_.pop();
            x = find(x);
            if (processed_[x] || d > dist_[x] || dist_[x] > limit) continue;
            current_ = dist_[x];
            process(x, watch);
        }
        if (!pq_.empty() && truncated_) boundary_active_ = true;
    }

    CoverGraph export_graph(const Chassis& c, VertexId base) {
        CoverGraph g;
        g.eps = c.eps;
        g.base_vertex = base;
        g.truncated = truncated_;
        g.upper_bound = truncated_ || boundary_active_;
        std::vector<std::uint32_t> reps;
        for (std::uint32_t x = 0; x < proj_.size(); ++x)
            if (find(x) == x) reps.push_back(x);
        std::vector<std::uint32_t> id(proj_.size(), kNone);
        for (std::uint32_t i = 0; i < reps.size(); ++i) id[reps[i]] = i;
        const std::size_t n = reps.size();
        g.projection.resize(n);
        g.adjacency.resize(n);
        for (std::uint32_t i = 0; i < n; ++i) {
            const std::uint32_t x = reps[i];
            g.projection[i] = proj_[x];
            const auto& adj = c.adjacency[proj_[x]];
            for (std::uint32_t k = 0; k < adj.size(); ++k)
                if (lifts_[x][k] != kNone) g.adjacency[i].emplace_back(adj[k].first, id[find(lifts_[x][k])]);
            std::sort(g.adjacency[i].begin(), g.adjacency[i].end());
        }
        g.base_node = id[find(0)];
        // Exact lifted distances on the built graph.
        g.distance.assign(n, std::numeric_limits<double>::infinity());
        g.parent.assign(n, kNone);
        using Item = std::pair<double, std::uint32_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        g.distance[g.base_node] = 0.0;
        g.parent[g.base_node] = g.base_node;
        pq.emplace(0.0, g.base_node);
        while (!pq.empty()) {
            auto [d, x] = pq.top();
            pq.pop();
            if (d > g.distance[x]) continue;
            for (auto [w, y] : g.adjacency[x]) {
                const double nd = d + (*c.space)(c.vertices[g.projection[x]], c.vertices[w]);
                if (nd < g.distance[y] || (nd == g.distance[y] && x < g.parent[y])) {
                    if (nd < g.distance[y]) pq.emplace(nd, y);
                    g.distance[y] = nd;
                    g.parent[y] = x;
                }
            }
        }
        return g;
    }

private:
    std::uint32_t index_of(VertexId u, VertexId v) const {
        const auto& adj = c_.adjacency[u];
        auto it = std::lower_bound(adj.begin(), adj.end(), v,
                                   [](const std::pair<VertexId, EdgeId>& e, VertexId key) { return e.first < key; });
        return it != adj.end() && it->first == v ? static_cast<std::uint32_t>(it - adj.begin()) : kNone;
    }

    std::uint32_t lift(std::uint32_t x, std::uint32_t k) {
        const std::uint32_t y = lifts_[x][k];
        return y == kNone ? kNone : find(y);
    }

    double edge_length(VertexId u, std::uint32_t k) const { return c_.edges[c_.adjacency[u][k].second].length; }

    void relax(std::uint32_t from, std::uint32_t to, double len) {
        if (dist_[from] + len < dist_[to]) {
            dist_[to] = dist_[from] + len;
            parent_[to] = from;
            pq_.emplace(dist_[to], to);
        }
    }

    // Links x --k--> y and the reverse edge; clashes become coincidences.
    void link(std::uint32_t x, std::uint32_t k, std::uint32_t y) {
        const VertexId u = proj_[x];
        const std::uint32_t kb = back_[u][k];
        const std::uint32_t old = lift(x, k);
        if (old == kNone)
            lifts_[x][k] = y;
        else if (old != y)
            coincidences_.emplace_back(old, y);
        const std::uint32_t old_back = lift(y, kb);
        if (old_back == kNone)
            lifts_[y][kb] = x;
        else if (old_back != x)
            coincidences_.emplace_back(old_back, x);
        const double len = edge_length(u, k);
        relax(x, y, len);
        relax(y, x, len);
    }

    void merge_all(double watch) {
        while (!coincidences_.empty()) {
            auto [p, q] = coincidences_.back();
            coincidences_.pop_back();
            p = find(p);
            q = find(q);
            if (p == q) continue;
            if (q < p) std::swap(p, q);
            if (current_ > watch && std::min(dist_[p], dist_[q]) <= inner_) boundary_active_ = true;
            rep_[q] = p;
            --live_;
            if (dist_[q] < dist_[p]) {
                dist_[p] = dist_[q];
                parent_[p] = parent_[q];
            }
            for (std::uint32_t k = 0; k < lifts_[q].size(); ++k) {
                const std::uint32_t t = lifts_[q][k];
                if (t == kNone) continue;
                const std::uint32_t mine = lift(p, k);
                if (mine == kNone)
                    lifts_[p][k] = t;
                else if (mine != find(t))
                    coincidences_.emplace_back(mine, t);
            }
            lifts_[q].clear();
            lifts_[q].shrink_to_fit();
            // The merged node may owe new deductions.
            if (processed_[p] || processed_[q]) {
                processed_[p] = 0;
                pq_.emplace(dist_[p], p);
            }
        }
    }

    void process(std::uint32_t x, double watch) {
        const VertexId u = proj_[x];
        const auto& adj = c_.adjacency[u];
        for (std::uint32_t k = 0; k < adj.size(); ++k) {
            if (lift(x, k) != kNone) continue;
            const std::uint32_t y = make_node(adj[k].first, dist_[x] + edge_length(u, k), x);
            link(x, k, y);
        }
        merge_all(watch);
        x = find(x);
        processed_[x] = 1;
        for (const auto& t : corners_[proj_[x]]) {
            x = find(x);
            const std::uint32_t y = lift(x, t.kv);
            const std::uint32_t z = lift(x, t.kw);
            if (y == kNone || z == kNone) continue;
            const std::uint32_t yz = lift(y, t.kvw);
            if (yz == kNone)
                link(y, t.kvw, z);
            else if (yz != z)
                coincidences_.emplace_back(yz, z);
            merge_all(watch);
        }
    }

    const Chassis& c_;
    std::size_t budget_;
    std::vector<std::vector<Corner>> corners_;
    std::vector<std::vector<std::uint32_t>> back_;
    std::vector<VertexId> proj_;
    std::vector<double> dist_;
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> rep_;
    std::vector<std::vector<std::uint32_t>> lifts_;
    std::vector<char> processed_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> coincidences_;
    std::priority_queue<std::pair<double, std::uint32_t>, std::vector<std::pair<double, std::uint32_t>>, std::greater<>>
        pq_;
    std::size_t live_ = 0;
    double current_ = 0.0;
    double inner_ = 0.0;
    bool truncated_ = false;
    bool boundary_active_ = false;
};

}  // namespace

std::vector<std::uint32_t> CoverGraph::fiber(VertexId vertex, double r) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t x = 0; x < size(); ++x)
        if (projection[x] == vertex && distance[x] <= r + 1e-9) out.push_back(x);
    std::stable_sort(out.begin(), out.end(), [&](auto a, auto b) { return distance[a] < distance[b]; });
    return out;
}

std::vector<VertexId> CoverGraph::path_to(std::uint32_t node) const {
    std::vector<VertexId> path;
    for (std::uint32_t x = node;; x = parent[x]) {
        if (parent[x] == std::numeric_limits<std::uint32_t>::max())
            throw Error("CoverTooSmall", "node is not connected to the base in the built cover");
        path.push_back(projection[x]);
        if (x == base_node) break;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

CoverGraph build_cover(const Chassis& chassis, double radius, const CoverOptions& options) {
    if (options.base_vertex >= chassis.vertex_count()) throw Error("MalformedInput", "cover base vertex out of range");
    const double margin = options.margin < 0 ? 4 * chassis.eps : options.margin;
    Enumerator en(chassis, options.node_budget);
    // Identifications that reach back inside the radius while the outer half
    // of the margin is processed mean the inner region had not settled.
    en.run(options.base_vertex, radius, radius + margin, radius + margin / 2);
    CoverGraph g = en.export_graph(chassis, options.base_vertex);
    g.radius = radius;
    g.margin = margin;
    return g;
}

ShortClasses count_short_classes(const CoverGraph& cover, const Chassis& chassis, double L) {
    if (cover.radius < L) throw Error("CoverTooSmall", "cover radius is below the requested norm bound");
    ShortClasses out;
    out.upper_bound = cover.upper_bound;
    for (auto x : cover.fiber(cover.base_vertex, L)) {
        if (!(cover.distance[x] < L - 1e-9)) continue;
        out.norms.push_back(cover.distance[x]);
        out.representatives.push_back(chassis.to_points(cover.path_to(x)));
    }
    out.count = out.norms.size();
    return out;
}

ShortClasses count_short_classes(const FiniteMetricSpace& space, double eps, double L, const CoverOptions& options) {
    const Chassis c = build_chassis(space, eps);
    const CoverGraph g = build_cover(c, L, options);
    return count_short_classes(g, c, L);
}

GammaEstimate estimate_gamma(const FiniteMetricSpace& space, double L, double eps, std::size_t max_basepoints,
                             const CoverOptions& options) {
    const Chassis c = build_chassis(space, eps);
    GammaEstimate out;
    const std::size_t n = c.vertex_count();
    const std::size_t scan = max_basepoints == 0 ? n : std::min(n, max_basepoints);
    const std::size_t stride = std::max<std::size_t>(1, n / scan);
    for (std::size_t i = 0; i < n && out.basepoints_scanned < scan; i += stride) {
        CoverOptions opt = options;
        opt.base_vertex = static_cast<VertexId>(i);
        const CoverGraph g = build_cover(c, L, opt);
        const ShortClasses sc = count_short_classes(g, c, L);
        ++out.basepoints_scanned;
        out.upper_bound = out.upper_bound || sc.upper_bound;
        if (sc.count > out.value) {
            out.value = sc.count;
            out.argmax = c.vertices[i];
        }
    }
    out.exact = out.basepoints_scanned == n && !out.upper_bound;
    return out;
}

}  // namespace disco
