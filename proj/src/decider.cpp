#include "disco/decider.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <mutex>
#include <queue>
#include <unordered_map>

#include "disco/error.hpp"

namespace disco {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Null: return "Null";
        case Verdict::NotNull: return "NotNull";
        case Verdict::Unknown: return "Unknown";
    }
    return "Unknown";
}

const char* to_string(FreeVerdict v) {
    switch (v) {
        case FreeVerdict::Yes: return "Yes";
        case FreeVerdict::No: return "No";
        case FreeVerdict::Unknown: return "Unknown";
    }
    return "Unknown";
}

namespace {

void require_loop(const Chain& loop, const FiniteMetricSpace& space, double eps) {
    if (!loop.is_loop()) throw Error("NotALoop", "chain does not start and end at the same point");
    for (auto p : loop.points)
        if (p >= space.size()) throw Error("MalformedInput", "loop point " + std::to_string(p) + " out of range");
    if (auto bad = first_gap_violation(loop, space, eps))
        throw NotAnEpsilonChain(*bad, space(loop.points[*bad], loop.points[*bad + 1]));
}

// Removes immediate backtracks (x y x -> x) and repeated points inside
// [lo, hi] of the builder's chain. Returns the new hi.
std::size_t reduce_backtracks(HomotopyBuilder& b, std::size_t lo, std::size_t hi) {
    std::size_t i = lo + 1;
    while (i <= hi) {
        const auto& c = b.current();
        if (c[i] == c[i - 1]) {
            b.remove(i);
            --hi;
            i = std::max(lo + 1, i - 1);
        } else if (i + 1 <= hi && c[i - 1] == c[i + 1]) {
            b.remove(i);
            --hi;
        } else {
            ++i;
        }
    }
    return hi;
}

// Length of the piece [s..t] has pointwise diameter < eps; reach[s] is the
// largest such t.
// A piece c[s..t] collapses by removals when every point is closer than eps
// to c[s] (remove left to right) or to c[t] (remove right to left).
struct PieceTable {
    std::vector<std::size_t> left;   // largest t with d(c[s], c[r]) < eps for r in (s, t]
    std::vector<std::size_t> right;  // smallest s with d(c[r], c[t]) < eps for r in [s, t)

    PieceTable(const std::vector<PointId>& c, const FiniteMetricSpace& space, double eps) {
        const std::size_t n = c.size();
        left.assign(n, 0);
        right.assign(n, 0);
        for (std::size_t s = 0; s < n; ++s) {
            std::size_t t = s;
            while (t + 1 < n && space(c[s], c[t + 1]) < eps) ++t;
            left[s] = t;
        }
        for (std::size_t t = 0; t < n; ++t) {
            std::size_t s = t;
            while (s > 0 && space(c[s - 1], c[t]) < eps) --s;
            right[t] = s;
        }
    }
    bool ok(std::size_t s, std::size_t t) const { return t <= left[s] || s >= right[t]; }
};

void collapse_piece(HomotopyBuilder& b, const PieceTable& table, std::size_t s, std::size_t t) {
    if (t <= table.left[s]) {
        for (std::size_t r = s + 1; r < t; ++r) b.remove(s + 1);
    } else {
        for (std::size_t r = t - 1; r > s; --r) b.remove(r);
    }
}

bool try_three_pieces(HomotopyBuilder& b, const FiniteMetricSpace& space, double eps) {
    const auto c = b.current();
    const std::size_t last = c.size() - 1;
    const PieceTable table(c, space, eps);
    std::optional<std::pair<std::size_t, std::size_t>> cut;
    for (std::size_t i = 0; i <= last && !cut; ++i) {
        if (!table.ok(0, i)) continue;
        for (std::size_t j = i; j <= last; ++j)
            if (table.ok(i, j) && table.ok(j, last)) {
                cut.emplace(i, j);
                break;
            }
    }
    if (!cut) return false;
    const auto [i, j] = *cut;
    // Collapse the pieces [j..last], [i..j], [0..i] back to front so earlier
    // positions stay valid; each leaves only its endpoints.
    collapse_piece(b, table, j, last);
    collapse_piece(b, table, i, j);
    collapse_piece(b, table, 0, i);
    // Now c0 ci cj c0 (or shorter) with every pair closer than eps.
    while (b.current().size() > 1) {
        const std::size_t n = b.current().size();
        if (n == 2) {
            b.remove(1);
        } else {
            b.remove(n - 2);
        }
    }
    return true;
}

}  // namespace

std::optional<Homotopy> contract_short_loop(const Chain& loop, const FiniteMetricSpace& space, double eps) {
    require_loop(loop, space, eps);
    if (!(length(loop, space) < 3 * eps)) return std::nullopt;
    HomotopyBuilder b(space, loop, eps);
    for (int round = 0; round < 4; ++round) {
        if (try_three_pieces(b, space, eps)) return b.finish();
        // Refine in place; the best midpoint is never farther than the pair.
        const auto cur = b.current();
        const std::size_t pairs = cur.size() - 1;
        for (std::size_t k = 0; k < pairs; ++k) {
            const PointId x = cur[k];
            const PointId y = cur[k + 1];
            const auto mid = approx_midpoint(space, x, y, std::numeric_limits<double>::infinity());
            if (mid.point != x && mid.point != y) b.insert(2 * k + 1, mid.point);
            else b.insert(2 * k + 1, x);
        }
        // Duplicates introduced above carry no information.
        reduce_backtracks(b, 0, b.current().size() - 1);
        if (b.current().size() == 1) return b.finish();
    }
    return std::nullopt;
}

// NullDecider ------------------------------------------------------------------

namespace {

// Triangle closure on a 2-complex given as a graph whose triangles are its
// 3-cliques, with a rooted spanning tree. cost[e] is the number of moves that
// turn the edge into its tree path, witness[e] the apex used for it.
struct Closure {
    static constexpr std::uint64_t kOpen = std::numeric_limits<std::uint64_t>::max();
    static constexpr std::uint32_t kNil = std::numeric_limits<std::uint32_t>::max();

    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> adj;  // (neighbour, edge), sorted
    std::vector<std::pair<std::uint32_t, std::uint32_t>> ends;
    std::vector<char> in_tree;
    std::vector<std::uint32_t> parent;
    std::vector<PointId> point;

    std::vector<std::uint64_t> cost;
    std::vector<std::uint32_t> witness;

    std::uint32_t edge(std::uint32_t a, std::uint32_t b) const {
        const auto& r = adj[a];
        auto it = std::lower_bound(r.begin(), r.end(), std::make_pair(b, std::uint32_t{0}));
        return it != r.end() && it->first == b ? it->second : kNil;
    }

    // Generalized Dijkstra: an edge closes once a triangle joins it to two
    // closed edges; the cost counts apex insertions.
    void build() {
        const std::size_t E = ends.size();
        cost.assign(E, kOpen);
        witness.assign(E, kNil);
        std::vector<char> done(E, 0);
        using Item = std::pair<std::uint64_t, std::uint32_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        for (std::uint32_t e = 0; e < E; ++e)
            if (in_tree[e]) {
                cost[e] = 0;
                pq.emplace(0, e);
            }
        auto saturating = [](std::uint64_t a, std::uint64_t b) { return a > kOpen - 1 - b ? kOpen - 1 : a + b; };
        auto relax = [&](std::uint32_t z, std::uint32_t target, std::uint32_t e1, std::uint32_t e2) {
            if (done[target]) return;
            const std::uint64_t k = saturating(saturating(cost[e1], cost[e2]), 1);
            if (k < cost[target]) {
                cost[target] = k;
                witness[target] = z;
                pq.emplace(k, target);
            }
        };
        while (!pq.empty()) {
            auto [k, e] = pq.top();
            pq.pop();
            if (done[e] || k != cost[e]) continue;
            done[e] = 1;
            const auto [a, b] = ends[e];
            const auto& ra = adj[a];
            const auto& rb = adj[b];
            std::size_t i = 0, j = 0;
            while (i < ra.size() && j < rb.size()) {
                if (ra[i].first < rb[j].first) {
                    ++i;
                } else if (rb[j].first < ra[i].first) {
                    ++j;
                } else {
                    // Triangle a b z with z = ra[i].first.
                    const std::uint32_t az = ra[i].second;
                    const std::uint32_t bz = rb[j].second;
                    if (done[az] && !done[bz]) relax(a, bz, e, az);  // [b,z] via a
                    if (done[bz] && !done[az]) relax(b, az, e, bz);  // [a,z] via b
                    ++i;
                    ++j;
                }
            }
        }
    }

    // Turns [a, b] at positions pos, pos+1 into the tree path from a to b.
    // Returns the new position of b.
    std::size_t expand(HomotopyBuilder& hb, std::uint32_t a, std::uint32_t b, std::size_t pos) const {
        const std::uint32_t e = edge(a, b);
        if (in_tree[e]) return pos + 1;
        const std::uint32_t z = witness[e];
        hb.insert(pos + 1, point[z]);
        const std::size_t pz = expand(hb, a, z, pos);
        const std::size_t pb = expand(hb, z, b, pz);
        // Only the junction at z can backtrack.
        std::size_t j = pz;
        std::size_t end = pb;
        while (j > pos && j < end && hb.current()[j - 1] == hb.current()[j + 1]) {
            hb.remove(j);
            hb.remove(j);
            end -= 2;
            --j;
        }
        return end;
    }

    // Certificate for a loop whose points are point[walk[i]]: closed edges
    // become tree paths, then every backtrack is removed.
    std::optional<Homotopy> certify(const Chain& loop, const std::vector<std::uint32_t>& walk,
                                    const FiniteMetricSpace& space, double eps, std::uint64_t max_moves) const {
        std::uint64_t total = 0;
        for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
            if (walk[i] == walk[i + 1]) continue;
            const std::uint32_t e = edge(walk[i], walk[i + 1]);
            if (e == kNil) return std::nullopt;
            if (cost[e] != kOpen) total += cost[e];
            if (total > max_moves) return std::nullopt;
        }
        HomotopyBuilder hb(space, loop, eps);
        std::size_t pos = 0;
        for (std::size_t idx = 0; idx + 1 < walk.size(); ++idx) {
            const std::uint32_t a = walk[idx];
            const std::uint32_t b = walk[idx + 1];
            if (a == b || cost[edge(a, b)] == kOpen) {
                ++pos;
                continue;
            }
            pos = expand(hb, a, b, pos);
        }
        reduce_backtracks(hb, 0, hb.current().size() - 1);
        if (hb.current().size() != 1) return std::nullopt;
        return hb.finish();
    }
};

// Closure of the chassis with the shortest-path tree rooted at `root`, so
// loops based there only meet open edges far from their basepoint.
Closure rooted_closure(const Chassis& c, VertexId root) {
    Closure cl;
    const std::size_t n = c.vertex_count();
    cl.adj.resize(n);
    for (VertexId v = 0; v < n; ++v)
        for (auto [w, e] : c.adjacency[v]) cl.adj[v].emplace_back(w, e);
    for (const auto& e : c.edges) cl.ends.emplace_back(e.a, e.b);
    cl.point.assign(c.vertices.begin(), c.vertices.end());

    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    cl.parent.assign(n, Closure::kNil);
    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[root] = 0;
    cl.parent[root] = root;
    pq.emplace(0.0, root);
    std::vector<VertexId> order;
    while (!pq.empty()) {
        auto [d, x] = pq.top();
        pq.pop();
        if (d > dist[x]) continue;
        order.push_back(x);
        for (auto [y, e] : c.adjacency[x]) {
            const double nd = d + c.edges[e].length;
            if (nd < dist[y]) {
                dist[y] = nd;
                cl.parent[y] = x;
                pq.emplace(nd, y);
            }
        }
    }
    cl.in_tree.assign(cl.ends.size(), 0);
    for (auto x : order)
        if (x != root) cl.in_tree[cl.edge(x, cl.parent[x])] = 1;
    cl.build();
    return cl;
}

// The cover graph as a complex: its triangles are lifts of chassis triangles
// and its tree is the lifted shortest-path tree.
struct CoverClosure {
    CoverGraph cover;
    Closure closure;
};

CoverClosure cover_closure(const Chassis& c, CoverGraph g) {
    CoverClosure out;
    Closure& cl = out.closure;
    const std::size_t n = g.size();
    cl.adj.resize(n);
    for (std::uint32_t x = 0; x < n; ++x)
        for (auto [w, y] : g.adjacency[x]) {
            (void)w;
            if (x < y) {
                const auto e = static_cast<std::uint32_t>(cl.ends.size());
                cl.ends.emplace_back(x, y);
                cl.adj[x].emplace_back(y, e);
                cl.adj[y].emplace_back(x, e);
            }
        }
    for (auto& r : cl.adj) std::sort(r.begin(), r.end());
    cl.parent.assign(g.parent.begin(), g.parent.end());
    cl.in_tree.assign(cl.ends.size(), 0);
    for (std::uint32_t x = 0; x < n; ++x)
        if (cl.parent[x] != x && cl.parent[x] != Closure::kNil) cl.in_tree[cl.edge(x, cl.parent[x])] = 1;
    cl.point.resize(n);
    for (std::uint32_t x = 0; x < n; ++x) cl.point[x] = c.vertices[g.projection[x]];
    cl.build();
    out.cover = std::move(g);
    return out;
}

}  // namespace

struct NullDecider::Impl {
    const FiniteMetricSpace* space;
    double eps;
    DeciderBudget budget;
    Chassis chassis;
    H1Map h1;
    Presentation presentation;

    mutable std::mutex closure_mutex;
    mutable std::map<VertexId, std::shared_ptr<const Closure>> closures;

    mutable std::once_flag simplify_once;
    mutable std::optional<SimplifiedPresentation> simplified;

    // Covers around loop basepoints, grown on demand.
    mutable std::mutex cover_mutex;
    mutable std::map<VertexId, std::shared_ptr<const CoverClosure>> covers;

    std::shared_ptr<const Closure> chassis_table(VertexId root) const {
        {
            std::lock_guard<std::mutex> lock(closure_mutex);
            auto it = closures.find(root);
            if (it != closures.end()) return it->second;
        }
        auto built = std::make_shared<const Closure>(rooted_closure(chassis, root));
        std::lock_guard<std::mutex> lock(closure_mutex);
        return closures.emplace(root, built).first->second;
    }

    std::shared_ptr<const CoverClosure> cover_at(VertexId base, double radius) const {
        {
            std::lock_guard<std::mutex> lock(cover_mutex);
            auto it = covers.find(base);
            if (it != covers.end() && it->second->cover.radius >= radius) return it->second;
        }
        CoverOptions opt;
        opt.base_vertex = base;
        opt.node_budget = budget.cover_nodes;
        auto built = std::make_shared<const CoverClosure>(cover_closure(chassis, build_cover(chassis, radius, opt)));
        std::lock_guard<std::mutex> lock(cover_mutex);
        auto& slot = covers[base];
        if (!slot || slot->cover.radius < built->cover.radius) slot = built;
        return slot;
    }

    const SimplifiedPresentation* simplify() const {
        std::call_once(simplify_once, [&] {
            try {
                simplified = simplify_presentation(presentation, budget.simplify);
            } catch (const BudgetExhausted&) {
                simplified.reset();
            }
        });
        return simplified ? &*simplified : nullptr;
    }
};

NullDecider::NullDecider(const FiniteMetricSpace& space, double eps, DeciderBudget budget)
    : impl_(std::make_unique<Impl>()) {
    impl_->space = &space;
    impl_->eps = eps;
    impl_->budget = budget;
    impl_->chassis = build_chassis(space, eps, VertexMode::all());
    impl_->h1 = H1Map::compute(impl_->chassis);
    impl_->presentation = extract_presentation(impl_->chassis);
}

NullDecider::~NullDecider() = default;
NullDecider::NullDecider(NullDecider&&) noexcept = default;
NullDecider& NullDecider::operator=(NullDecider&&) noexcept = default;

const Chassis& NullDecider::chassis() const { return impl_->chassis; }
const H1Map& NullDecider::homology() const { return impl_->h1; }
const Presentation& NullDecider::presentation() const { return impl_->presentation; }
const SimplifiedPresentation* NullDecider::simplified() const { return impl_->simplify(); }
double NullDecider::scale() const noexcept { return impl_->eps; }
const FiniteMetricSpace& NullDecider::space() const noexcept { return *impl_->space; }
const DeciderBudget& NullDecider::budget() const noexcept { return impl_->budget; }

std::optional<Word> NullDecider::reduced_word(const std::vector<VertexId>& loop) const {
    const auto* sp = simplified();
    if (!sp) return std::nullopt;
    try {
        return sp->rewrite(loop_word(impl_->chassis, impl_->presentation, loop));
    } catch (const BudgetExhausted&) {
        return std::nullopt;
    }
}

std::optional<Homotopy> NullDecider::short_loop_certificate(const Chain& loop) const {
    return contract_short_loop(loop, *impl_->space, impl_->eps);
}

std::optional<Homotopy> NullDecider::closure_certificate(const Chain& loop) const {
    const auto& im = *impl_;
    const auto verts = im.chassis.to_vertices(loop);
    const std::vector<std::uint32_t> walk(verts.begin(), verts.end());
    return im.chassis_table(verts.front())->certify(loop, walk, *im.space, im.eps, im.budget.max_certificate_moves);
}

std::optional<Homotopy> NullDecider::cover_certificate(const Chain& loop) const {
    const auto& im = *impl_;
    if (im.budget.cover_nodes == 0) return std::nullopt;
    const auto verts = im.chassis.to_vertices(loop);
    // A null loop lifts to a closed walk, which stays within half its length.
    const double radius = length(loop, *im.space) / 2 + im.eps;
    const auto cc = im.cover_at(verts.front(), radius);
    const CoverGraph& g = cc->cover;
    std::vector<std::uint32_t> walk{g.base_node};
    for (std::size_t i = 1; i < verts.size(); ++i) {
        const std::uint32_t x = walk.back();
        if (verts[i] == g.projection[x]) {
            walk.push_back(x);
            continue;
        }
        const auto& r = g.adjacency[x];
        auto it = std::lower_bound(r.begin(), r.end(), std::make_pair(verts[i], std::uint32_t{0}));
        if (it == r.end() || it->first != verts[i]) return std::nullopt;
        walk.push_back(it->second);
    }
    if (walk.back() != g.base_node) return std::nullopt;
    return cc->closure.certify(loop, walk, *im.space, im.eps, im.budget.max_certificate_moves);
}

namespace {

struct ChainHash {
    std::size_t operator()(const std::vector<PointId>& v) const noexcept {
        std::size_t h = 1469598103934665603ULL;
        for (auto x : v) {
            h ^= x;
            h *= 1099511628211ULL;
        }
        return h;
    }
};

// Leftmost-first canonical reduction: drop repeated points and interior
// points whose removal strictly shortens the chain.
void canonical_reduce(std::vector<PointId>& c, const FiniteMetricSpace& space, double eps,
                      std::vector<BasicMove>& moves) {
    std::size_t i = 1;
    while (i < c.size()) {
        const bool last = i + 1 == c.size();
        bool drop = false;
        if (c[i] == c[i - 1]) {
            drop = true;
        } else if (!last) {
            const double bridged = space(c[i - 1], c[i + 1]);
            drop = bridged < eps && bridged < space(c[i - 1], c[i]) + space(c[i], c[i + 1]) - 1e-12;
        }
        if (drop) {
            c.erase(c.begin() + static_cast<std::ptrdiff_t>(i));
            moves.push_back(BasicMove::remove(i));
            i = std::max<std::size_t>(1, i - 1);
        } else {
            ++i;
        }
    }
}

}  // namespace

NullVerdict NullDecider::search(const Chain& loop) const {
    const auto& im = *impl_;
    const auto& space = *im.space;
    const double eps = im.eps;
    NullVerdict out;
    out.stage = 4;
    std::size_t cap = im.budget.bfs_max_points;
    if (cap == 0) cap = normal_steps(3 * space.diameter(), eps) + 1;
    cap = std::max(cap, loop.count());

    struct Node {
        std::vector<PointId> chain;
        std::uint32_t parent;
        std::vector<BasicMove> moves;  // from parent's chain to this one
    };
    std::vector<Node> nodes;
    std::unordered_map<std::vector<PointId>, std::uint32_t, ChainHash> seen;
    std::vector<BasicMove> first_moves;
    std::vector<PointId> start = loop.points;
    canonical_reduce(start, space, eps, first_moves);
    nodes.push_back({start, 0, first_moves});
    seen.emplace(start, 0);

    auto certificate = [&](std::uint32_t goal) {
        std::vector<std::uint32_t> path;
        for (std::uint32_t k = goal;; k = nodes[k].parent) {
            path.push_back(k);
            if (k == 0) break;
        }
        HomotopyBuilder hb(space, loop, eps);
        for (auto it = path.rbegin(); it != path.rend(); ++it)
            for (const auto& m : nodes[*it].moves) {
                if (m.kind == BasicMove::Kind::Insert)
                    hb.insert(m.position, m.point);
                else
                    hb.remove(m.position);
            }
        return hb.finish();
    };

    if (start.size() == 1) {
        out.verdict = Verdict::Null;
        out.certificate = certificate(0);
        out.states_explored = 1;
        return out;
    }

    std::size_t head = 0;
    while (head < nodes.size()) {
        if (head >= im.budget.bfs_states) {
            out.verdict = Verdict::Unknown;
            out.states_explored = head;
            out.frontier = nodes.size() - head;
            out.note = "search budget exhausted";
            return out;
        }
        const auto cur = nodes[head].chain;
        const auto cur_id = static_cast<std::uint32_t>(head);
        ++head;
        auto visit = [&](std::vector<PointId> next, std::vector<BasicMove> moves) -> bool {
            canonical_reduce(next, space, eps, moves);
            if (next.size() > cap) return false;
            auto [it, fresh] = seen.emplace(next, static_cast<std::uint32_t>(nodes.size()));
            if (!fresh) return false;
            nodes.push_back({std::move(next), cur_id, std::move(moves)});
            return nodes.back().chain.size() == 1;
        };
        // Removals that keep the chain (length-neutral ones survive reduction).
        for (std::size_t i = 1; i + 1 < cur.size(); ++i) {
            if (!(space(cur[i - 1], cur[i + 1]) < eps)) continue;
            auto next = cur;
            next.erase(next.begin() + static_cast<std::ptrdiff_t>(i));
            if (visit(std::move(next), {BasicMove::remove(i)})) {
                out.verdict = Verdict::Null;
                out.certificate = certificate(static_cast<std::uint32_t>(nodes.size() - 1));
                out.states_explored = head;
                out.frontier = nodes.size() - head;
                return out;
            }
        }
        if (cur.size() + 1 > cap) continue;
        for (std::size_t i = 1; i < cur.size(); ++i) {
            for (PointId p = 0; p < space.size(); ++p) {
                if (!(space(cur[i - 1], p) < eps) || !(space(p, cur[i]) < eps)) continue;
                if (p == cur[i - 1] || p == cur[i]) continue;
                auto next = cur;
                next.insert(next.begin() + static_cast<std::ptrdiff_t>(i), p);
                if (visit(std::move(next), {BasicMove::insert(i, p)})) {
                    out.verdict = Verdict::Null;
                    out.certificate = certificate(static_cast<std::uint32_t>(nodes.size() - 1));
                    out.states_explored = head;
                    out.frontier = nodes.size() - head;
                    return out;
                }
            }
        }
    }
    out.verdict = Verdict::Unknown;
    out.states_explored = head;
    out.frontier = 0;
    out.note = "search space exhausted within the chain size cap";
    return out;
}

NullVerdict NullDecider::decide(const Chain& loop, bool allow_search) const {
    const auto& im = *impl_;
    require_loop(loop, *im.space, im.eps);
    NullVerdict out;

    if (auto h = short_loop_certificate(loop)) {
        out.verdict = Verdict::Null;
        out.stage = 1;
        out.certificate = std::move(h);
        return out;
    }

    const auto verts = im.chassis.to_vertices(loop);
    H1Class cls = im.h1.loop_class(verts);
    if (!cls.zero()) {
        out.verdict = Verdict::NotNull;
        out.stage = 2;
        out.h1 = std::move(cls);
        return out;
    }

    if (auto h = closure_certificate(loop)) {
        out.verdict = Verdict::Null;
        out.stage = 3;
        out.certificate = std::move(h);
        return out;
    }
    if (auto h = cover_certificate(loop)) {
        out.verdict = Verdict::Null;
        out.stage = 3;
        out.certificate = std::move(h);
        out.note = "closed in the covering complex";
        return out;
    }
    if (const auto* sp = simplified(); sp && sp->free()) {
        if (auto w = reduced_word(verts); w && !w->empty()) {
            out.verdict = Verdict::NotNull;
            out.stage = 3;
            out.free_word = std::move(w);
            return out;
        }
    }

    if (!allow_search) {
        out.note = "search stage skipped";
        return out;
    }
    out = search(loop);
    if (out.verdict == Verdict::Unknown) out.stage = 5;
    return out;
}

NullVerdict decide_null(const Chain& loop, const FiniteMetricSpace& space, double eps, const DeciderBudget& budget) {
    require_loop(loop, space, eps);
    if (length(loop, space) < 3 * eps) {
        if (auto h = contract_short_loop(loop, space, eps)) {
            NullVerdict out;
            out.verdict = Verdict::Null;
            out.stage = 1;
            out.certificate = std::move(h);
            return out;
        }
    }
    // Every eps-homotopy stays inside the eps-component of the basepoint, so a
    // disconnected scale is handled on that component alone.
    std::vector<PointId> comp{loop.front()};
    std::vector<char> seen(space.size(), 0);
    seen[loop.front()] = 1;
    for (std::size_t k = 0; k < comp.size(); ++k)
        for (PointId q = 0; q < space.size(); ++q)
            if (!seen[q] && space(comp[k], q) < eps) {
                seen[q] = 1;
                comp.push_back(q);
            }
    if (comp.size() == space.size()) {
        NullDecider decider(space, eps, budget);
        return decider.decide(loop);
    }
    std::sort(comp.begin(), comp.end());
    const std::size_t m = comp.size();
    std::vector<PointId> local(space.size(), 0);
    for (std::size_t i = 0; i < m; ++i) local[comp[i]] = static_cast<PointId>(i);
    std::vector<double> dist(m * m);
    std::vector<std::string> labels(m);
    for (std::size_t i = 0; i < m; ++i) {
        labels[i] = space.labels()[comp[i]];
        for (std::size_t j = 0; j < m; ++j) dist[i * m + j] = space(comp[i], comp[j]);
    }
    const FiniteMetricSpace sub(m, std::move(dist), std::move(labels), space.meta());
    Chain mapped;
    for (PointId p : loop.points) mapped.points.push_back(local[p]);
    NullDecider decider(sub, eps, budget);
    NullVerdict out = decider.decide(mapped);
    if (out.certificate) {
        for (PointId& p : out.certificate->start.points) p = comp[p];
        for (BasicMove& mv : out.certificate->moves)
            if (mv.kind == BasicMove::Kind::Insert) mv.point = comp[mv.point];
    }
    if (!out.note.empty()) out.note += "; ";
    out.note += "decided on the eps-component of the basepoint (" + std::to_string(m) + " points)";
    return out;
}

// Free homotopy ----------------------------------------------------------------

namespace {

bool cyclic_rotation_of(const Word& a, const Word& b) {
    if (a.size() != b.size()) return false;
    if (a.empty()) return true;
    Word doubled = a;
    doubled.insert(doubled.end(), a.begin(), a.end());
    return std::search(doubled.begin(), doubled.end(), b.begin(), b.end()) != doubled.end();
}

Word invert(const Word& w) {
    Word out(w.rbegin(), w.rend());
    for (auto& x : out) x = -x;
    return out;
}

}  // namespace

FreeHomotopyResult free_homotopic(const Chain& l1, const Chain& l2, const NullDecider& decider, bool allow_reversal) {
    const auto& space = decider.space();
    const double eps = decider.scale();
    require_loop(l1, space, eps);
    require_loop(l2, space, eps);
    const auto& ch = decider.chassis();
    FreeHomotopyResult out;

    const auto v1 = ch.to_vertices(l1);
    const auto v2 = ch.to_vertices(l2);
    const auto& orders = decider.homology().summary().torsion;
    const H1Class c1 = decider.homology().loop_class(v1);
    const H1Class c2 = decider.homology().loop_class(v2);
    const bool same = c1 == c2;
    const bool opposite = allow_reversal && c1 == c2.negated(orders);
    if (!same && !opposite) {
        out.verdict = FreeVerdict::No;
        out.class1 = c1;
        out.class2 = c2;
        out.note = "homology classes differ";
        return out;
    }

    // Conjugacy in a free presentation is decided by cyclic words.
    if (const auto* sp = decider.simplified(); sp && sp->free()) {
        auto w1 = decider.reduced_word(v1);
        auto w2 = decider.reduced_word(v2);
        if (w1 && w2) {
            cyclic_reduce(*w1);
            cyclic_reduce(*w2);
            const bool forward = cyclic_rotation_of(*w1, *w2);
            const bool backward = allow_reversal && cyclic_rotation_of(*w1, invert(*w2));
            out.word1 = std::move(w1);
            out.word2 = std::move(w2);
            if (!forward && !backward) {
                out.verdict = FreeVerdict::No;
                out.note = "cyclic words are not conjugate in a free presentation";
                return out;
            }
            out.verdict = FreeVerdict::Yes;
            out.reversed = !forward;
            out.note = "cyclic words are conjugate in a free presentation";
            // A chain-level witness is attached below when one is cheap to find.
        }
    }

    // Rotations and orientations of l2 joined to l1 by a tree path; the
    // conjugated product is tested without the breadth-first stage.
    const std::size_t n2 = l2.steps();
    std::vector<bool> orientations{false};
    if (allow_reversal) orientations.push_back(true);
    for (bool rev : orientations) {
        if (rev ? !opposite : !same) continue;
        const Chain base2 = rev ? reverse(l2) : l2;
        for (std::size_t s = 0; s < std::max<std::size_t>(n2, 1); ++s) {
            Chain rotated;
            for (std::size_t i = 0; i <= n2; ++i)
                rotated.points.push_back(base2.points[(s + i) % std::max<std::size_t>(n2, 1)]);
            const auto path = ch.tree_path(ch.vertex_of_point[l1.front()], ch.vertex_of_point[rotated.front()]);
            const Chain eta = ch.to_points(path);
            const Chain product = concat(concat(concat(l1, eta), reverse(rotated)), reverse(eta));
            const NullVerdict v = decider.decide(product, false);
            if (v.verdict == Verdict::Null) {
                out.verdict = FreeVerdict::Yes;
                out.reversed = rev;
                out.shift = s;
                out.conjugator = eta;
                out.null_certificate = v.certificate;
                return out;
            }
        }
    }
    if (out.verdict == FreeVerdict::Yes) return out;
    out.verdict = FreeVerdict::Unknown;
    out.note = "no conjugating chain found within budget";
    return out;
}

}  // namespace disco
