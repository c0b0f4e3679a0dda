#include "disco/spectrum.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <mutex>
#include <queue>
#include <thread>

#include "disco/error.hpp"

namespace disco {

const char* to_string(Essential e) {
    switch (e) {
        case Essential::Yes: return "Yes";
        case Essential::No: return "No";
        case Essential::Unknown: return "Unknown";
    }
    return "Unknown";
}

std::vector<double> candidate_scales(const FiniteMetricSpace& space, double eps_min) {
    if (!(eps_min > 0)) throw Error("MalformedInput", "eps_min must be positive");
    std::vector<double> all;
    const std::size_t n = space.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (space(i, j) >= eps_min) all.push_back(space(i, j));
    std::sort(all.begin(), all.end());
    const double window = space.resolution() / 4;
    std::vector<double> out;
    for (double d : all)
        if (out.empty() || d - out.back() > window) out.push_back(d);
    return out;
}

// Persistence ------------------------------------------------------------------

std::vector<PersistenceInterval> persistent_h1(const FiniteMetricSpace& space, const std::vector<double>& scales,
                                               std::size_t max_triangles) {
    std::vector<PersistenceInterval> out;
    if (scales.empty()) return out;
    if (!std::is_sorted(scales.begin(), scales.end())) throw Error("MalformedInput", "scales must be sorted");
    const double top = scales.back();
    const std::size_t n = space.size();

    struct E {
        double d;
        PointId u, v;
    };
    std::vector<E> edges;
    for (PointId i = 0; i < n; ++i)
        for (PointId j = i + 1; j < n; ++j)
            if (space(i, j) < top) edges.push_back({space(i, j), i, j});
    std::sort(edges.begin(), edges.end(), [](const E& a, const E& b) {
        return std::tie(a.d, a.u, a.v) < std::tie(b.d, b.u, b.v);
    });
    const auto m = static_cast<std::uint32_t>(edges.size());
    // Edge index by endpoints, through per-vertex sorted neighbour lists.
    std::vector<std::vector<std::pair<PointId, std::uint32_t>>> adj(n);
    for (std::uint32_t e = 0; e < m; ++e) {
        adj[edges[e].u].emplace_back(edges[e].v, e);
        adj[edges[e].v].emplace_back(edges[e].u, e);
    }
    for (auto& r : adj) std::sort(r.begin(), r.end());
    // Triangles keyed by their latest edge.
    std::vector<std::array<std::uint32_t, 3>> tri;
    for (PointId a = 0; a < n; ++a) {
        for (auto [b, eab] : adj[a]) {
            if (b <= a) continue;
            for (auto [c, eac] : adj[a]) {
                if (c <= b) continue;
                const auto& rb = adj[b];
                auto it = std::lower_bound(rb.begin(), rb.end(), std::make_pair(c, std::uint32_t{0}));
                if (it == rb.end() || it->first != c) continue;
                std::array<std::uint32_t, 3> t{eab, eac, it->second};
                std::sort(t.begin(), t.end());
                tri.push_back(t);
                if (tri.size() > max_triangles)
                    throw Error("MatrixTooLarge", "persistence complex exceeds the triangle budget");
            }
        }
    }
    std::sort(tri.begin(), tri.end(), [](const auto& x, const auto& y) {
        return std::make_tuple(x[2], x[1], x[0]) < std::make_tuple(y[2], y[1], y[0]);
    });

    // Edges that do not merge components create H1 classes.
    std::vector<std::uint32_t> uf(n);
    std::iota(uf.begin(), uf.end(), 0u);
    auto find = [&](std::uint32_t x) {
        while (uf[x] != x) x = uf[x] = uf[uf[x]];
        return x;
    };
    std::vector<char> creator(m, 0);
    for (std::uint32_t e = 0; e < m; ++e) {
        const auto a = find(edges[e].u);
        const auto b = find(edges[e].v);
        if (a == b)
            creator[e] = 1;
        else
            uf[std::max(a, b)] = std::min(a, b);
    }

    // Column reduction over Z/2; columns are sorted edge lists.
    constexpr std::uint32_t kFree = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> owner(m, kFree);
    std::vector<std::vector<std::uint32_t>> reduced;
    std::vector<double> death(m, std::numeric_limits<double>::infinity());
    std::vector<std::uint32_t> col, tmp;
    for (const auto& t : tri) {
        col.assign(t.begin(), t.end());
        while (!col.empty() && owner[col.back()] != kFree) {
            const auto& other = reduced[owner[col.back()]];
            tmp.clear();
            std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(), std::back_inserter(tmp));
            col.swap(tmp);
        }
        if (col.empty()) continue;
        owner[col.back()] = static_cast<std::uint32_t>(reduced.size());
        death[col.back()] = edges[t[2]].d;
        reduced.push_back(col);
    }
    for (std::uint32_t e = 0; e < m; ++e) {
        if (!creator[e] || !(death[e] > edges[e].d)) continue;
        out.push_back({edges[e].d, death[e], edges[e].u, edges[e].v});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::tie(a.birth, a.death, a.u, a.v) < std::tie(b.birth, b.death, b.u, b.v);
    });
    return out;
}

// Triads -----------------------------------------------------------------------

bool pointwise_close(const Triad& a, const Triad& b, const FiniteMetricSpace& space, double eps) {
    std::array<int, 3> perm{0, 1, 2};
    do {
        bool ok = true;
        for (int k = 0; k < 3 && ok; ++k) ok = space(a.points[k], b.points[perm[k]]) < eps / 3;
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

namespace {

unsigned worker_count(unsigned requested) {
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
    threads = static_cast<unsigned>(std::min<std::size_t>(worker_count(threads), std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

// Midpoint-refines the triangle loop until it is an eps-chain.
std::optional<Chain> refine_triad(const std::array<PointId, 3>& p, const FiniteMetricSpace& space, double eps) {
    Chain loop{p[0], p[1], p[2], p[0]};
    for (int round = 0; round < 3; ++round) {
        if (is_eps_chain(loop, space, eps)) return loop;
        loop = midpoint_refine(loop, space, eps, std::numeric_limits<double>::infinity()).chain;
    }
    if (is_eps_chain(loop, space, eps)) return loop;
    return std::nullopt;
}

void decide_triad(Triad& t, const NullDecider& decider, bool allow_search) {
    const auto refined = refine_triad(t.points, decider.space(), decider.scale());
    if (!refined) {
        t.essential = Essential::Unknown;
        return;
    }
    t.refined_loop = *refined;
    const NullVerdict v = decider.decide(t.refined_loop, allow_search);
    switch (v.verdict) {
        case Verdict::NotNull:
            t.essential = Essential::Yes;
            t.h1 = v.h1;
            break;
        case Verdict::Null: t.essential = Essential::No; break;
        case Verdict::Unknown: t.essential = Essential::Unknown; break;
    }
}

}  // namespace

std::vector<Triad> find_essential_triads(const NullDecider& decider, double tol, const TriadSearchOptions& options) {
    const FiniteMetricSpace& space = decider.space();
    const double eps = decider.scale();
    const std::size_t n = space.size();
    std::vector<Triad> chosen;
    if (eps - tol > space.diameter()) return chosen;

    auto near = [&](PointId a, PointId b) { return std::abs(space(a, b) - eps) <= tol; };
    std::vector<std::vector<PointId>> ring(n);
    for (PointId i = 0; i < n; ++i)
        for (PointId j = i + 1; j < n; ++j)
            if (near(i, j)) ring[i].push_back(j);

    // bucket[p]: chosen triads with a corner closer than eps/3 to p.
    std::vector<std::vector<std::uint32_t>> bucket(n);
    for (PointId i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < ring[i].size(); ++a) {
            const PointId j = ring[i][a];
            for (std::size_t b = a + 1; b < ring[i].size(); ++b) {
                const PointId k = ring[i][b];
                if (!near(j, k)) continue;
                Triad t;
                t.points = {i, j, k};
                t.scale = eps;
                const double d[3] = {space(i, j), space(j, k), space(i, k)};
                t.mean_distance = (d[0] + d[1] + d[2]) / 3;
                for (double x : d) t.tolerance = std::max(t.tolerance, std::abs(x - eps));
                if (options.prune) {
                    bool absorbed = false;
                    for (auto c : bucket[i])
                        if (pointwise_close(chosen[c], t, space, eps)) {
                            ++chosen[c].absorbed;
                            absorbed = true;
                            break;
                        }
                    if (absorbed) continue;
                    const auto id = static_cast<std::uint32_t>(chosen.size());
                    for (PointId p = 0; p < n; ++p)
                        if (space(p, i) < eps / 3 || space(p, j) < eps / 3 || space(p, k) < eps / 3)
                            bucket[p].push_back(id);
                }
                chosen.push_back(std::move(t));
            }
        }
    }
    parallel_for(chosen.size(), options.threads,
                 [&](std::size_t i) { decide_triad(chosen[i], decider, options.allow_search); });
    return chosen;
}

std::vector<Triad> find_essential_triads(const FiniteMetricSpace& space, double eps, double tol,
                                         const DeciderBudget& budget, const TriadSearchOptions& options) {
    if (eps - tol > space.diameter()) return {};
    const NullDecider decider(space, eps, budget);
    return find_essential_triads(decider, tol, options);
}

TriadPartition triad_equivalence_classes(const std::vector<Triad>& triads, const NullDecider& decider) {
    const std::size_t n = triads.size();
    const auto& space = decider.space();
    const double eps = decider.scale();
    std::vector<std::size_t> uf(n);
    std::iota(uf.begin(), uf.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (uf[x] != x) x = uf[x] = uf[uf[x]];
        return x;
    };
    auto unite = [&](std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) uf[std::max(a, b)] = std::min(a, b);
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (pointwise_close(triads[i], triads[j], space, eps)) unite(i, j);

    TriadPartition out;
    std::vector<std::size_t> leaders;
    for (std::size_t i = 0; i < n; ++i) {
        if (find(i) != i) continue;
        bool merged = false;
        for (auto l : leaders) {
            const auto r = free_homotopic(triads[l].refined_loop, triads[i].refined_loop, decider, true);
            if (r.verdict == FreeVerdict::Yes) {
                unite(l, i);
                merged = true;
                break;
            }
            if (r.verdict == FreeVerdict::Unknown) out.unresolved.emplace_back(l, i);
        }
        if (!merged) leaders.push_back(i);
    }
    std::vector<std::vector<std::size_t>> groups(n);
    for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
    for (auto& g : groups)
        if (!g.empty()) out.classes.push_back(std::move(g));
    return out;
}

// Spectrum ---------------------------------------------------------------------

namespace {

struct ScaleResult {
    double scale;
    std::vector<Triad> critical;
    std::size_t unknown = 0;
    TriadPartition partition;
};

}  // namespace

SpectrumReport compute_spectrum(const FiniteMetricSpace& space, double eps_min, const SpectrumOptions& options) {
    SpectrumReport rep;
    rep.space_meta = space.meta();
    rep.eps_min = eps_min;
    const double h = space.resolution();
    rep.resolution = h;
    rep.tolerance = options.tolerance > 0 ? options.tolerance : h;
    const double tol = rep.tolerance;

    double start = eps_min;
    if (eps_min < 3 * h) {
        if (options.resolution == ResolutionPolicy::Error) throw ResolutionTooCoarse(eps_min, 3 * h);
        start = 3 * h;
        rep.notes.push_back("eps_min raised to three times the sample resolution");
    }
    rep.scanned_from = start;
    auto cands = candidate_scales(space, start);
    if (options.eps_max > 0)
        cands.erase(std::remove_if(cands.begin(), cands.end(), [&](double c) { return c > options.eps_max; }),
                    cands.end());
    rep.candidates = cands;
    if (cands.empty()) return rep;

    std::vector<ScaleResult> found;
    std::unique_ptr<NullDecider> current;
    std::vector<Triad> pending;
    std::size_t last_scanned = 0;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        const double c = cands[i];
        if (!current) current = std::make_unique<NullDecider>(space, c, options.budget);
        const double above = i + 1 < cands.size() ? cands[i + 1] : c + tol / 2;
        auto next = std::make_unique<NullDecider>(space, above, options.budget);

        ScaleResult sr;
        sr.scale = c;
        try {
            auto triads = find_essential_triads(*current, tol, options.triads);
            for (auto& t : triads) {
                if (t.essential == Essential::Unknown) ++sr.unknown;
                if (t.essential != Essential::Yes) continue;
                const NullVerdict v = next->decide(t.refined_loop, options.triads.allow_search);
                if (v.verdict == Verdict::Null)
                    sr.critical.push_back(std::move(t));
                else if (v.verdict == Verdict::Unknown)
                    ++sr.unknown;
            }
            if (!sr.critical.empty()) sr.partition = triad_equivalence_classes(sr.critical, *current);
        } catch (const BudgetExhausted& e) {
            rep.partial = true;
            rep.notes.push_back("budget exhausted at scale " + std::to_string(c) + ": " + e.what());
            break;
        }
        if (sr.unknown > 0)
            rep.notes.push_back(std::to_string(sr.unknown) + " triads undecided at scale " + std::to_string(c));
        if (!sr.critical.empty()) found.push_back(std::move(sr));
        last_scanned = i;

        const auto* sp = next->simplified();
        current = std::move(next);
        if (options.stop_when_trivial && sp && sp->alive.empty()) {
            rep.notes.push_back("scan stopped at scale " + std::to_string(above) +
                                ": the presentation there is trivial");
            break;
        }
    }
    rep.scanned_to = cands[last_scanned];

    // Persistence over the scanned range, one scale beyond it.
    std::vector<double> pscales(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(last_scanned) + 1);
    pscales.push_back(last_scanned + 1 < cands.size() ? cands[last_scanned + 1] : cands[last_scanned] + tol / 2);
    try {
        rep.persistence = persistent_h1(space, pscales, options.max_triangles);
    } catch (const Error& e) {
        rep.notes.push_back(std::string("persistence skipped: ") + e.what());
    }

    // Merge critical scales lying strictly within 2h of the first of a run.
    std::size_t i = 0;
    while (i < found.size()) {
        std::size_t j = i + 1;
        while (j < found.size() && found[j].scale - found[i].scale < 2 * h - 1e-12) ++j;
        CriticalValue cv;
        double weight = 0, sum = 0;
        std::size_t best = i;
        for (std::size_t k = i; k < j; ++k) {
            const double w = static_cast<double>(found[k].partition.classes.size());
            sum += w * found[k].scale;
            weight += w;
            cv.merged_scales.push_back(found[k].scale);
            cv.unknown_triads += found[k].unknown;
            if (found[k].partition.classes.size() > found[best].partition.classes.size()) best = k;
        }
        cv.epsilon = sum / weight;
        cv.tolerance = tol;
        cv.multiplicity = found[best].partition.classes.size();
        for (const auto& cls : found[best].partition.classes) cv.classes.push_back(found[best].critical[cls.front()]);
        if (!found[best].partition.unresolved.empty())
            rep.notes.push_back("some triad pairs at scale " + std::to_string(found[best].scale) +
                                " stayed unresolved; multiplicity may be an over-count");
        for (const auto& iv : rep.persistence)
            if (std::isfinite(iv.death) && std::abs(iv.death - cv.epsilon) <= 2 * h + 1e-12) cv.evidence.push_back(iv);
        if (cv.evidence.empty())
            rep.notes.push_back("critical value " + std::to_string(cv.epsilon) +
                                " has no H1 persistence death within 2h");
        rep.critical_values.push_back(std::move(cv));
        i = j;
    }
    std::sort(rep.critical_values.begin(), rep.critical_values.end(),
              [](const auto& a, const auto& b) { return a.epsilon > b.epsilon; });
    if (!rep.critical_values.empty()) rep.systole_estimate = 3 * rep.critical_values.back().epsilon;
    return rep;
}

// Embedding ----------------------------------------------------------------------

EmbeddingReport check_metric_embedding(const Chain& loop, const FiniteMetricSpace& space) {
    if (!loop.is_loop()) throw Error("NotALoop", "embedding check needs a closed chain");
    EmbeddingReport rep;
    rep.circle = loop;
    rep.threshold = 2 * space.resolution();
    const std::size_t m = loop.steps();
    std::vector<double> pos(m + 1, 0.0);
    for (std::size_t k = 0; k < m; ++k) pos[k + 1] = pos[k] + space(loop.points[k], loop.points[k + 1]);
    const double total = pos[m];
    rep.circle_length = total;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b) {
            const double along = pos[b] - pos[a];
            const double arc = std::min(along, total - along);
            const double gap = std::abs(arc - space(loop.points[a], loop.points[b]));
            if (gap > rep.discrepancy) {
                rep.discrepancy = gap;
                rep.worst_i = a;
                rep.worst_j = b;
            }
        }
    rep.embedded = rep.discrepancy <= rep.threshold + 1e-12;
    return rep;
}

EmbeddingReport check_metric_embedding(const std::array<PointId, 3>& triad, const FiniteMetricSpace& space) {
    const std::size_t n = space.size();
    for (auto p : triad)
        if (p >= n) throw Error("MalformedInput", "triad point out of range");
    const double h = space.resolution();
    const double step = 2 * h * (1 + 1e-9);

    auto geodesic = [&](PointId a, PointId b) {
        std::vector<double> dist(n, std::numeric_limits<double>::infinity());
        std::vector<PointId> prev(n, static_cast<PointId>(n));
        using Item = std::pair<double, PointId>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        dist[a] = 0;
        pq.emplace(0.0, a);
        while (!pq.empty()) {
            auto [d, x] = pq.top();
            pq.pop();
            if (d > dist[x]) continue;
            if (x == b) break;
            for (PointId y = 0; y < n; ++y) {
                const double w = space(x, y);
                if (y == x || w > step) continue;
                if (d + w < dist[y]) {
                    dist[y] = d + w;
                    prev[y] = x;
                    pq.emplace(dist[y], y);
                }
            }
        }
        if (!(dist[b] <= space(a, b) + 2 * h + 1e-12))
            throw Error("NoGeodesicRealization", "no near-geodesic chain between triad corners " + std::to_string(a) +
                                                     " and " + std::to_string(b));
        std::vector<PointId> path;
        for (PointId x = b; x != a; x = prev[x]) path.push_back(x);
        path.push_back(a);
        std::reverse(path.begin(), path.end());
        return path;
    };

    Chain circle{triad[0]};
    for (int s = 0; s < 3; ++s) {
        const auto side = geodesic(triad[s], triad[(s + 1) % 3]);
        circle.points.insert(circle.points.end(), side.begin() + 1, side.end());
    }
    return check_metric_embedding(circle, space);
}

}  // namespace disco
