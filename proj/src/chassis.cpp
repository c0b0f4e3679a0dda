#include "disco/chassis.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace disco {

EdgeId Chassis::find_edge(VertexId u, VertexId v) const {
    const auto& row = adjacency[u];
    auto it = std::lower_bound(row.begin(), row.end(), v,
                               [](const std::pair<VertexId, EdgeId>& entry, VertexId key) { return entry.first < key; });
    return it != row.end() && it->first == v ? it->second : kNoEdge;
}

std::vector<VertexId> Chassis::tree_path(VertexId u, VertexId v) const {
    std::vector<VertexId> left{u};
    std::vector<VertexId> right{v};
    while (left.back() != right.back()) {
        if (depth[left.back()] >= depth[right.back()])
            left.push_back(parent[left.back()]);
        else
            right.push_back(parent[right.back()]);
    }
    right.pop_back();
    left.insert(left.end(), right.rbegin(), right.rend());
    return left;
}

Chain Chassis::to_points(const std::vector<VertexId>& path) const {
    Chain out;
    out.points.reserve(path.size());
    for (auto v : path) out.points.push_back(vertices[v]);
    return out;
}

std::vector<VertexId> Chassis::to_vertices(const Chain& chain) const {
    std::vector<VertexId> out;
    out.reserve(chain.count());
    for (auto p : chain.points) {
        const VertexId v = p < vertex_of_point.size() ? vertex_of_point[p] : kNoVertex;
        if (v == kNoVertex) throw Error("NotSimplicial", "point " + std::to_string(p) + " is not a chassis vertex");
        out.push_back(v);
    }
    return out;
}

Chassis build_chassis(const FiniteMetricSpace& space, double eps, VertexMode mode) {
    if (!(eps > 0.0)) throw Error("NonpositiveScale", "chassis scale must be positive");
    Chassis c;
    c.space = &space;
    c.eps = eps;
    c.mode = mode;
    c.vertex_of_point.assign(space.size(), Chassis::kNoVertex);
    if (mode.kind == VertexMode::Kind::All) {
        for (PointId p = 0; p < space.size(); ++p) c.vertices.push_back(p);
    } else {
        if (!(mode.delta > 0.0)) throw Error("NonpositiveScale", "net radius must be positive");
        for (PointId p = 0; p < space.size(); ++p) {
            bool covered = false;
            for (auto v : c.vertices) {
                if (space(p, v) < mode.delta) {
                    covered = true;
                    break;
                }
            }
            if (!covered) c.vertices.push_back(p);
        }
    }
    const std::size_t m = c.vertices.size();
    for (VertexId v = 0; v < m; ++v) c.vertex_of_point[c.vertices[v]] = v;

    c.adjacency.resize(m);
    for (VertexId a = 0; a < m; ++a) {
        for (VertexId b = a + 1; b < m; ++b) {
            const double d = space(c.vertices[a], c.vertices[b]);
            if (d < eps) {
                const auto e = static_cast<EdgeId>(c.edges.size());
                c.edges.push_back({a, b, d});
                c.adjacency[a].emplace_back(b, e);
                c.adjacency[b].emplace_back(a, e);
            }
        }
    }
    for (auto& row : c.adjacency) std::sort(row.begin(), row.end());

    for (const auto& e : c.edges) {
        const auto& ra = c.adjacency[e.a];
        const auto& rb = c.adjacency[e.b];
        auto ia = std::upper_bound(ra.begin(), ra.end(), std::make_pair(e.b, std::numeric_limits<EdgeId>::max()));
        auto ib = std::upper_bound(rb.begin(), rb.end(), std::make_pair(e.b, std::numeric_limits<EdgeId>::max()));
        while (ia != ra.end() && ib != rb.end()) {
            if (ia->first < ib->first) {
                ++ia;
            } else if (ib->first < ia->first) {
                ++ib;
            } else {
                c.triangles.push_back({e.a, e.b, ia->first});
                ++ia;
                ++ib;
            }
        }
    }
    std::sort(c.triangles.begin(), c.triangles.end());

    // Connectivity.
    std::vector<char> seen(m, 0);
    std::vector<VertexId> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const VertexId u = stack.back();
        stack.pop_back();
        for (auto [v, e] : c.adjacency[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                ++reached;
                stack.push_back(v);
            }
        }
    }
    if (reached != m)
        throw Error("DisconnectedAtScale", "1-skeleton is disconnected at scale " + std::to_string(eps));

    build_spanning_tree(c);
    return c;
}

namespace {

// Dijkstra on edge lengths. pred[source] = source.
void shortest_paths(const Chassis& c, VertexId source, std::vector<double>& dist, std::vector<VertexId>& pred,
                    std::vector<EdgeId>& pred_edge) {
    const std::size_t m = c.vertices.size();
    dist.assign(m, std::numeric_limits<double>::infinity());
    pred.assign(m, Chassis::kNoVertex);
    pred_edge.assign(m, kNoEdge);
    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[source] = 0.0;
    pred[source] = source;
    pq.emplace(0.0, source);
    while (!pq.empty()) {
        auto [du, u] = pq.top();
        pq.pop();
        if (du > dist[u]) continue;
        for (auto [v, e] : c.adjacency[u]) {
            const double nd = du + c.edges[e].length;
            if (nd < dist[v]) {
                dist[v] = nd;
                pred[v] = u;
                pred_edge[v] = e;
                pq.emplace(nd, v);
            }
        }
    }
}

}  // namespace

void build_spanning_tree(Chassis& c) {
    const std::size_t m = c.vertices.size();
    c.simplicial_dist.assign(m * m, 0.0);
    std::vector<double> dist;
    std::vector<VertexId> pred;
    std::vector<EdgeId> pred_edge;
    std::vector<VertexId> base_pred;
    std::vector<EdgeId> base_pred_edge;
    for (VertexId s = 0; s < m; ++s) {
        shortest_paths(c, s, dist, pred, pred_edge);
        std::copy(dist.begin(), dist.end(), c.simplicial_dist.begin() + static_cast<std::ptrdiff_t>(s * m));
        if (s == c.basepoint) {
            base_pred = pred;
            base_pred_edge = pred_edge;
        }
    }
    c.simplicial_diameter = m ? *std::max_element(c.simplicial_dist.begin(), c.simplicial_dist.end()) : 0.0;

    c.in_tree.assign(c.edges.size(), 0);
    c.parent.assign(m, Chassis::kNoVertex);
    c.parent_edge.assign(m, kNoEdge);
    c.depth.assign(m, 0);
    std::vector<char> attached(m, 0);
    attached[c.basepoint] = 1;
    c.parent[c.basepoint] = c.basepoint;
    std::size_t remaining = m - 1;

    // Farthest unattached vertex first; its shortest path runs until it
    // meets the tree, after which the tree's own path to the base is used.
    std::vector<VertexId> order(m);
    for (VertexId v = 0; v < m; ++v) order[v] = v;
    const double* base_row = c.simplicial_dist.data() + c.basepoint * m;
    std::stable_sort(order.begin(), order.end(),
                     [&](VertexId x, VertexId y) { return base_row[x] > base_row[y]; });
    std::size_t cursor = 0;
    while (remaining > 0) {
        while (attached[order[cursor]]) ++cursor;
        VertexId v = order[cursor];
        while (!attached[v]) {
            attached[v] = 1;
            --remaining;
            c.parent[v] = base_pred[v];
            c.parent_edge[v] = base_pred_edge[v];
            c.in_tree[base_pred_edge[v]] = 1;
            v = base_pred[v];
        }
    }
    // Hop depth, resolved parent-first.
    std::vector<char> done(m, 0);
    done[c.basepoint] = 1;
    for (VertexId v = 0; v < m; ++v) {
        std::vector<VertexId> stack;
        VertexId u = v;
        while (!done[u]) {
            stack.push_back(u);
            u = c.parent[u];
        }
        while (!stack.empty()) {
            const VertexId w = stack.back();
            stack.pop_back();
            c.depth[w] = c.depth[c.parent[w]] + 1;
            done[w] = 1;
        }
    }
}

Presentation extract_presentation(const Chassis& c) {
    Presentation p;
    p.basepoint = c.vertices[c.basepoint];
    p.generator_of_edge.assign(c.edges.size(), -1);
    for (EdgeId e = 0; e < c.edges.size(); ++e) {
        if (c.in_tree[e]) continue;
        auto path = c.tree_path(c.basepoint, c.edges[e].a);
        auto back = c.tree_path(c.edges[e].b, c.basepoint);
        path.insert(path.end(), back.begin(), back.end());
        Generator g{e, c.to_points(path), 0.0};
        g.length = length(g.loop, *c.space);
        p.generator_of_edge[e] = static_cast<std::int32_t>(p.generators.size());
        p.generators.push_back(std::move(g));
    }
    p.relations.reserve(c.triangles.size());
    for (const auto& t : c.triangles) {
        p.relations.push_back({p.generator_of_edge[c.find_edge(t[0], t[1])],
                               p.generator_of_edge[c.find_edge(t[1], t[2])],
                               p.generator_of_edge[c.find_edge(t[0], t[2])]});
    }
    return p;
}

Word loop_word(const Chassis& c, const Presentation& p, const std::vector<VertexId>& loop) {
    Word w;
    for (std::size_t i = 0; i + 1 < loop.size(); ++i) {
        const VertexId u = loop[i];
        const VertexId v = loop[i + 1];
        if (u == v) continue;
        const EdgeId e = c.find_edge(u, v);
        if (e == kNoEdge) throw Error("NotSimplicial", "consecutive vertices are not joined by an edge");
        const std::int32_t g = p.generator_of_edge[e];
        if (g < 0) continue;
        w.push_back(u < v ? g + 1 : -(g + 1));
    }
    free_reduce(w);
    return w;
}

Projection project_to_chassis(const Chain& chain, const Chassis& c) {
    const auto& space = *c.space;
    Projection out;
    if (chain.points.empty()) throw Error("EmptyChain", "cannot project an empty chain");
    for (std::size_t i = 0; i < chain.count(); ++i) {
        const PointId p = chain.points[i];
        VertexId best = c.vertex_of_point[p];
        if (best == Chassis::kNoVertex) {
            if (i == 0 || i + 1 == chain.count())
                throw Error("NotSimplicial", "chain endpoints must be chassis vertices");
            double nearest = std::numeric_limits<double>::infinity();
            for (VertexId v = 0; v < c.vertices.size(); ++v) {
                const double d = space(p, c.vertices[v]);
                if (d < nearest) {
                    nearest = d;
                    best = v;
                }
            }
        }
        out.vertices.push_back(best);
    }
    out.chain = c.to_points(out.vertices);
    const double dev = deviation(chain, out.chain, space);
    const double slack = excess(chain, space, c.eps);
    if (!(dev < slack / 2.0)) {
        throw Error("SnapTooCoarse", "snap deviation " + std::to_string(dev) + " is not below half the excess " +
                                         std::to_string(slack / 2.0) + "; refine first");
    }
    out.certificate = close_homotopy(chain, out.chain, space, c.eps);
    out.length_increase = length(out.chain, space) - length(chain, space);
    return out;
}

}  // namespace disco
