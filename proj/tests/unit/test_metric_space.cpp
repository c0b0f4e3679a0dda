#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "disco/metric_space.hpp"
#include "oracles.hpp"

using namespace disco;

TEST_CASE("distance matrix validation") {
    auto one = from_distance_matrix({{0.0}});
    CHECK(one.size() == 1);
    CHECK(one.diameter() == 0.0);

    auto two = from_distance_matrix({{0, 1}, {1, 0}});
    CHECK(two.diameter() == 1.0);

    try {
        from_distance_matrix({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}});
        FAIL("expected a triangle violation");
    } catch (const TriangleViolation& e) {
        CHECK(std::min(e.i, e.k) == 0);
        CHECK(std::max(e.i, e.k) == 2);
        CHECK(e.amount == doctest::Approx(1.0));
    }
    CHECK_THROWS_AS(from_distance_matrix({{0, 1}, {2, 0}}), Error);
    CHECK_THROWS_AS(from_distance_matrix({{0, -1}, {-1, 0}}), Error);
    CHECK_THROWS_AS(from_distance_matrix({{0, 0}, {0, 0}}), Error);
    CHECK_THROWS_AS(from_distance_matrix({{0, 1}, {1}}), Error);
}

TEST_CASE("weighted graph matches a Floyd-Warshall oracle") {
    SUBCASE("three parallel edges") {
        auto s = from_weighted_graph(2, {{0, 1, 1.5}, {0, 1, 1.5}, {0, 1, 1.5}}, 0.125);
        CHECK(s.size() == 35);
        CHECK(s.diameter() == doctest::Approx(1.5));
    }
    SUBCASE("single edge") {
        auto s = from_weighted_graph(2, {{0, 1, 1.0}}, 1.0);
        CHECK(s.size() == 2);
        CHECK(s(0, 1) == doctest::Approx(1.0));
    }
    SUBCASE("K4 subdivided") {
        std::vector<WeightedEdge> edges;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i + 1; j < 4; ++j) edges.push_back({i, j, 1.0});
        auto s = from_weighted_graph(4, edges, 0.25);
        CHECK(s.size() == 4 + 6 * 3);
        // Vertices are pairwise 1 apart; midpoints of opposite edges are 2 apart.
        double vertex_diameter = 0.0;
        for (PointId i = 0; i < 4; ++i)
            for (PointId j = 0; j < 4; ++j) vertex_diameter = std::max(vertex_diameter, s(i, j));
        CHECK(vertex_diameter == doctest::Approx(1.0));
        CHECK(s.diameter() == doctest::Approx(2.0));
    }
    SUBCASE("random graphs") {
        std::mt19937 rng(7);
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t v = 3 + rng() % 4;
            std::vector<WeightedEdge> edges;
            for (std::size_t i = 1; i < v; ++i) edges.push_back({rng() % i, i, 0.25 + (rng() % 8) * 0.25});
            for (int extra = 0; extra < 3; ++extra) edges.push_back({rng() % v, rng() % v, 0.5 + (rng() % 4) * 0.25});
            // Drop self-loops of subdivision 1: they add no points and no paths.
            const double spacing = 0.25;
            auto s = from_weighted_graph(v, edges, spacing);
            // Oracle: build the subdivided graph independently.
            std::vector<std::tuple<std::size_t, std::size_t, double>> sub;
            std::size_t next = v;
            for (const auto& e : edges) {
                const auto segs = static_cast<std::size_t>(std::ceil(e.weight / spacing - 1e-12));
                const double piece = e.weight / static_cast<double>(segs);
                std::size_t prev = e.u;
                for (std::size_t k = 1; k < segs; ++k) {
                    sub.emplace_back(prev, next, piece);
                    prev = next++;
                }
                sub.emplace_back(prev, e.v, piece);
            }
            REQUIRE(s.size() == next);
            const auto d = oracle::floyd_warshall(next, sub);
            for (PointId i = 0; i < s.size(); ++i)
                for (PointId j = 0; j < s.size(); ++j) CHECK(s(i, j) == doctest::Approx(d[i][j]).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(from_weighted_graph(3, {{0, 1, 1.0}}, 0.5), Error);
    CHECK_THROWS_AS(from_weighted_graph(2, {{0, 1, 0.0}}, 0.5), Error);
}

TEST_CASE("canonical samples") {
    CHECK(sample_circle(1.0, 4).diameter() == doctest::Approx(0.5));
    auto c12 = sample_circle(1.0, 12);
    CHECK(c12(0, 3) == doctest::Approx(0.25));
    CHECK(c12.diameter() == doctest::Approx(0.5));
    CHECK(sample_circle(3.0, 6).diameter() == doctest::Approx(1.5));
    CHECK_THROWS_AS(sample_circle(1.0, 2), Error);
    for (PointId i = 0; i < 12; ++i)
        for (PointId j = 0; j < 12; ++j) {
            const double fwd = ((j + 12 - i) % 12) / 12.0;
            const double bwd = ((i + 12 - j) % 12) / 12.0;
            CHECK(c12(i, j) == doctest::Approx(std::min(fwd, bwd)));
        }

    auto sq = sample_flat_torus(1.0 / 3, 1.0 / 3, 2, 2);
    CHECK(sq.size() == 4);
    CHECK(sq.diameter() == doctest::Approx(std::sqrt(2.0) / 2));
    auto rect = sample_flat_torus(1.0 / 3, 0.5, 12, 18);
    CHECK(rect.diameter() == doctest::Approx(std::sqrt(0.25 + 0.5625)));
    auto t3 = sample_flat_torus(1.0 / 3, 1.0 / 3, 3, 3);
    CHECK(t3.resolution() == doctest::Approx(1.0 / 3));
    CHECK_THROWS_AS(sample_flat_torus(0.5, 0.25, 4, 4), Error);
}

TEST_CASE("covering numbers") {
    auto c12 = sample_circle(1.0, 12);
    auto big = covering_number(c12, 0.6, CoverMode::Exact);
    CHECK(big.count == 1);

    auto r = covering_number(c12, 0.3, CoverMode::Exact);
    CHECK(r.exact);
    CHECK(r.count == 2);
    std::vector<std::uint32_t> sets;
    for (PointId c = 0; c < 12; ++c) {
        std::uint32_t mask = 0;
        for (PointId p = 0; p < 12; ++p)
            if (c12(c, p) < 0.3) mask |= 1u << p;
        sets.push_back(mask);
    }
    CHECK(oracle::min_cover(sets, 12) == 2);

    auto two = from_distance_matrix({{0, 1}, {1, 0}});
    CHECK(covering_number(two, 0.5, CoverMode::Exact).count == 2);

    auto c100 = sample_circle(1.0, 100);
    CHECK_THROWS_AS(covering_number(c100, 0.1, CoverMode::Exact), Error);
    auto g = covering_number(c100, 0.1, CoverMode::Greedy);
    CHECK_FALSE(g.exact);
    for (PointId p = 0; p < 100; ++p) {
        bool hit = false;
        for (auto c : g.centers) hit = hit || c100(p, c) < 0.1;
        CHECK(hit);
    }

    std::mt19937 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        auto s = sample_circle(1.0, 8 + rng() % 12);
        const double radius = 0.05 + (rng() % 20) * 0.02;
        auto ex = covering_number(s, radius, CoverMode::Exact);
        auto gr = covering_number(s, radius, CoverMode::Greedy);
        CHECK(gr.count >= ex.count);
        std::vector<std::uint32_t> masks;
        for (PointId c = 0; c < s.size(); ++c) {
            std::uint32_t m = 0;
            for (PointId p = 0; p < s.size(); ++p)
                if (s(c, p) < radius) m |= 1u << p;
            masks.push_back(m);
        }
        CHECK(ex.count == oracle::min_cover(masks, s.size()));
    }

    auto ball = covering_number_in_ball(c12, 0, 0.25, 0.2, CoverMode::Exact);
    CHECK(ball.count == 2);
}

TEST_CASE("approximate midpoints") {
    auto c12 = sample_circle(1.0, 12);
    auto same = approx_midpoint(c12, 4, 4, 0.0);
    CHECK(same.point == 4);
    CHECK(same.deviation == 0.0);
    auto m = approx_midpoint(c12, 0, 2, 0.0);
    CHECK(m.point == 1);
    CHECK(m.deviation == doctest::Approx(0.0));
    auto two = from_distance_matrix({{0, 1}, {1, 0}});
    try {
        approx_midpoint(two, 0, 1, 0.0);
        FAIL("expected failure");
    } catch (const NoMidpointWithinTolerance& e) {
        CHECK(e.best_deviation == doctest::Approx(0.5));
    }
    // Denser samples never do worse.
    auto c13 = sample_circle(1.0, 13);
    auto c26 = sample_circle(1.0, 26);
    auto coarse = approx_midpoint(c13, 0, 1, 1.0);
    auto fine = approx_midpoint(c26, 0, 2, 1.0);
    CHECK(fine.deviation <= coarse.deviation + 1e-12);
}

TEST_CASE("csv round trip") {
    auto c = sample_circle(1.0, 5);
    std::stringstream ss;
    write_distance_csv(ss, c);
    auto back = read_distance_csv(ss);
    REQUIRE(back.size() == 5);
    for (PointId i = 0; i < 5; ++i)
        for (PointId j = 0; j < 5; ++j) CHECK(back(i, j) == c(i, j));
    CHECK(back.labels() == c.labels());

    std::stringstream plain("0,2\n2,0\n");
    CHECK(read_distance_csv(plain).diameter() == 2.0);

    std::stringstream edges("# comment\n0 1 1.5\n1 2 0.5\n");
    auto el = read_edge_list(edges);
    CHECK(el.vertex_count == 3);
    CHECK(el.edges.size() == 2);
}
