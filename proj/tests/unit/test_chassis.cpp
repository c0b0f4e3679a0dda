#include <map>
#include <set>

#include "doctest.h"
#include "disco/chassis.hpp"
#include "oracles.hpp"

using namespace disco;

namespace {

// betti1 from ranks of the full boundary matrices over Q.
std::size_t betti_oracle(const Chassis& c) {
    using boost::multiprecision::cpp_int;
    std::vector<std::vector<cpp_int>> d2;
    for (const auto& t : c.triangles) {
        std::vector<cpp_int> row(c.edges.size(), 0);
        row[c.find_edge(t[0], t[1])] += 1;
        row[c.find_edge(t[1], t[2])] += 1;
        row[c.find_edge(t[0], t[2])] -= 1;
        d2.push_back(std::move(row));
    }
    const std::size_t rank2 = oracle::rational_rank(std::move(d2));
    return c.edges.size() - (c.vertex_count() - 1) - rank2;
}

void check_generators(const Chassis& c, const Presentation& p) {
    for (const auto& g : p.generators) {
        CHECK(g.loop.is_loop());
        CHECK(g.loop.front() == p.basepoint);
        CHECK(is_eps_chain(g.loop, *c.space, c.eps));
        CHECK(g.length <= 2 * c.simplicial_diameter + c.eps + 1e-12);
    }
    CHECK(p.generators.size() == c.edges.size() - (c.vertex_count() - 1));
}

}  // namespace

TEST_CASE("circle chassis") {
    auto c12 = sample_circle(1.0, 12);
    auto c = build_chassis(c12, 0.4);
    CHECK(c.vertex_count() == 12);
    CHECK(c.edges.size() == 48);
    std::size_t tri = 0;
    for (PointId i = 0; i < 12; ++i)
        for (PointId j = i + 1; j < 12; ++j)
            for (PointId k = j + 1; k < 12; ++k)
                if (c12(i, j) < 0.4 && c12(j, k) < 0.4 && c12(i, k) < 0.4) ++tri;
    CHECK(c.triangles.size() == tri);
    CHECK(tri == 76);
    // 4/12 < 0.4, so the inscribed triangle 0,4,8 is filled and the circle dies.
    auto h = compute_h1(c);
    CHECK(h.betti1 == 0);
    CHECK(h.betti1 == betti_oracle(c));

    auto thin = build_chassis(c12, 0.15);
    CHECK(thin.edges.size() == 12);
    CHECK(thin.triangles.empty());
    auto p = extract_presentation(thin);
    CHECK(p.generators.size() == 1);
    CHECK(p.relations.empty());
    check_generators(thin, p);
    auto sp = simplify_presentation(p);
    CHECK(sp.alive.size() == 1);
    CHECK(sp.free());
    CHECK(compute_h1(thin).betti1 == 1);
}

TEST_CASE("cones and trees") {
    auto two = from_distance_matrix({{0, 1}, {1, 0}});
    CHECK_THROWS_AS(build_chassis(two, 1.0), Error);

    auto c12 = sample_circle(1.0, 12);
    auto cone = build_chassis(c12, 0.6);
    CHECK(cone.edges.size() == 66);
    CHECK(cone.triangles.size() == 220);
    auto p = extract_presentation(cone);
    check_generators(cone, p);
    CHECK(simplify_presentation(p).trivial());
    CHECK(compute_h1(cone).betti1 == 0);

    // Star: a centre at distance 1 from three leaves pairwise 2 apart.
    auto star = from_distance_matrix({{0, 1, 1, 1}, {1, 0, 2, 2}, {1, 2, 0, 2}, {1, 2, 2, 0}});
    auto sc = build_chassis(star, 1.5);
    CHECK(sc.edges.size() == 3);
    CHECK(extract_presentation(sc).generators.empty());

    // K4: three tree edges and three generators, all killed.
    auto k4 = from_distance_matrix({{0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}});
    auto kc = build_chassis(k4, 1.5);
    auto kp = extract_presentation(kc);
    CHECK(kp.generators.size() == 3);
    CHECK(kp.relations.size() == 4);
    CHECK(simplify_presentation(kp).trivial());
}

TEST_CASE("spanning tree properties") {
    auto torus = sample_flat_torus(1.0 / 3, 1.0 / 3, 8, 8);
    auto c = build_chassis(torus, 0.2);
    std::size_t tree_edges = 0;
    for (auto t : c.in_tree) tree_edges += t ? 1 : 0;
    CHECK(tree_edges == c.vertex_count() - 1);
    for (VertexId v = 0; v < c.vertex_count(); ++v) {
        auto path = c.tree_path(v, c.basepoint);
        CHECK(length(c.to_points(path), torus) <= c.simplicial_diameter + 1e-12);
        CHECK(length(c.to_points(path), torus) == doctest::Approx(c.d_s(v, c.basepoint)));
        for (VertexId w = 0; w < c.vertex_count(); ++w) CHECK(torus(v, w) <= c.d_s(v, w) + 1e-12);
    }
}

TEST_CASE("simplification examples") {
    Presentation p;
    p.generators.resize(3);
    p.relations.push_back({0, 1, 2});  // ab = c
    auto s = simplify_presentation(p);
    CHECK(s.alive.size() == 2);
    CHECK(s.free());
    auto w = s.rewrite({3});
    CHECK(w.size() == 2);

    Presentation single;
    single.generators.resize(1);
    auto ss = simplify_presentation(single);
    CHECK(ss.alive.size() == 1);
    CHECK(ss.free());

    Word red{1, 2, -2, -1, 3};
    free_reduce(red);
    CHECK(red == Word{3});
    Word cyc{-1, 2, 3, 1};
    cyclic_reduce(cyc);
    CHECK(cyc == Word{2, 3});
}

TEST_CASE("torus homology") {
    auto rect = sample_flat_torus(1.0 / 3, 0.5, 12, 18);
    auto c = build_chassis(rect, 0.2);
    auto h = compute_h1(c);
    CHECK(h.betti1 == 2);
    CHECK(h.torsion.empty());

    auto sq = sample_flat_torus(1.0 / 3, 1.0 / 3, 8, 8);
    auto sc = build_chassis(sq, 0.2);
    CHECK(sc.edges.size() == 256);
    auto sh = H1Map::compute(sc);
    CHECK(sh.summary().betti1 == 2);
    CHECK(sh.summary().betti1 == betti_oracle(sc));
    // Triangle boundaries vanish; the two grid circles are independent.
    for (const auto& t : sc.triangles) CHECK(sh.loop_class({t[0], t[1], t[2], t[0]}).zero());
    std::vector<VertexId> horizontal, vertical;
    for (VertexId x = 0; x <= 8; ++x) horizontal.push_back(x % 8);
    for (VertexId y = 0; y <= 8; ++y) vertical.push_back((y % 8) * 8);
    auto hx = sh.loop_class(horizontal);
    auto vy = sh.loop_class(vertical);
    CHECK_FALSE(hx.zero());
    CHECK_FALSE(vy.zero());
    CHECK(hx.free != vy.free);
    CHECK(hx.free != vy.negated({}).free);

    auto p = extract_presentation(sc);
    check_generators(sc, p);
    auto simp = simplify_presentation(p);
    CHECK(simp.alive.size() == 2);
}

TEST_CASE("edge length bounds on dense samples") {
    // Sample resolution h <= min(eps/4, eps^2/(32 D)).
    auto c = sample_circle(1.0, 160);
    const double eps = 0.4;
    REQUIRE(c.resolution() <= std::min(eps / 4, eps * eps / (32 * c.diameter())) + 1e-15);
    auto ch = build_chassis(c, eps);
    for (VertexId a = 0; a < ch.vertex_count(); ++a)
        for (VertexId b = 0; b < ch.vertex_count(); ++b) {
            CHECK(c(a, b) <= ch.d_s(a, b) + 1e-12);
            CHECK(ch.d_s(a, b) <= c(a, b) + eps / 2 + 1e-12);
        }
}

TEST_CASE("projection onto a net") {
    auto c48 = sample_circle(1.0, 48);
    auto net = build_chassis(c48, 0.3, VertexMode::net(1.0 / 12 - 1e-9));
    CHECK(net.vertex_count() == 12);
    Chain simplicial{0, 4, 8, 12, 16, 20, 24, 28, 32, 36, 40, 44, 0};
    auto id = project_to_chassis(simplicial, net);
    CHECK(id.chain == simplicial);
    CHECK(id.certificate.moves.empty());

    Chain wobbly{0, 5, 9, 12, 17, 21, 24, 29, 33, 36, 41, 45, 0};
    auto pr = project_to_chassis(wobbly, net);
    CHECK(verify_homotopy(pr.certificate, c48).ok);
    CHECK(apply(pr.certificate) == pr.chain);

    Chain tight{0, 7, 14, 21, 28, 35, 42, 0};
    CHECK_THROWS_AS(project_to_chassis(tight, build_chassis(c48, 0.1459, VertexMode::net(1.0 / 12 - 1e-9))),
                    Error);
}
