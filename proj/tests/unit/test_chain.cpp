#include <random>

#include "doctest.h"
#include "disco/chain.hpp"

using namespace disco;

namespace {

Chain random_walk(const FiniteMetricSpace& s, double eps, std::size_t steps, std::mt19937& rng, PointId start) {
    Chain c{start};
    while (c.count() <= steps) {
        const PointId p = static_cast<PointId>(rng() % s.size());
        if (s(c.back(), p) < eps) c.points.push_back(p);
    }
    return c;
}

}  // namespace

TEST_CASE("length, excess, deviation") {
    auto c12 = sample_circle(1.0, 12);
    CHECK(length(Chain{3}, c12) == 0.0);
    Chain a{0, 1, 2};
    CHECK(length(a, c12) == doctest::Approx(2.0 / 12));
    CHECK(length(reverse(a), c12) == length(a, c12));

    CHECK(excess(Chain{5}, c12, 0.1) == kUnboundedExcess);
    CHECK(excess(a, c12, 0.2) == doctest::Approx(0.2 - 1.0 / 12));
    CHECK_THROWS_AS(excess(Chain{0, 3}, c12, 0.25), NotAnEpsilonChain);

    CHECK(deviation(a, a, c12) == 0.0);
    CHECK(deviation(a, Chain{0, 2, 2}, c12) == doctest::Approx(1.0 / 12));
    CHECK_THROWS_AS(deviation(a, Chain{0, 1, 2, 3}, c12), Error);
}

TEST_CASE("concat and reverse") {
    auto c12 = sample_circle(1.0, 12);
    Chain a{0, 1, 2};
    Chain b{2, 3};
    CHECK(concat(a, Chain{2}) == a);
    CHECK(reverse(Chain{4, 5, 6}) == Chain{6, 5, 4});
    CHECK(reverse(reverse(a)) == a);
    CHECK(length(concat(a, b), c12) == doctest::Approx(length(a, c12) + length(b, c12)));
    CHECK_THROWS_AS(concat(a, Chain{3, 4}), Error);
}

TEST_CASE("verify_homotopy basics") {
    auto c12 = sample_circle(1.0, 12);
    Homotopy h{Chain{0, 1, 2}, {}, 0.2};
    CHECK(verify_homotopy(h, c12).ok);
    h.moves.push_back(BasicMove::insert(1, 6));
    auto r = verify_homotopy(h, c12);
    CHECK_FALSE(r.ok);
    CHECK(r.failing_move == 0);
    CHECK(r.violated_gap == doctest::Approx(0.5));
    // Endpoints are fixed.
    Homotopy end{Chain{0, 1}, {BasicMove::remove(1)}, 0.2};
    CHECK_FALSE(verify_homotopy(end, c12).ok);
    Homotopy front{Chain{0, 1}, {BasicMove::insert(0, 1)}, 0.2};
    CHECK_FALSE(verify_homotopy(front, c12).ok);
}

TEST_CASE("close_homotopy") {
    auto c48 = sample_circle(1.0, 48);
    Chain loop{0, 6, 12, 18, 24, 30, 36, 42, 0};
    const double eps = 0.2;
    CHECK(close_homotopy(loop, loop, c48, eps).moves.empty());

    Chain shifted{0, 7, 13, 19, 25, 31, 37, 43, 0};
    auto h = close_homotopy(loop, shifted, c48, eps);
    CHECK(verify_homotopy(h, c48).ok);
    CHECK(apply(h) == shifted);
    CHECK(h.moves.size() <= 4 * loop.count());

    Chain far{0, 10, 12, 18, 24, 30, 36, 42, 0};
    CHECK_THROWS_AS(close_homotopy(loop, far, c48, eps), Error);

    // Randomized property check.
    auto torus = sample_flat_torus(1.0 / 3, 1.0 / 3, 8, 8);
    std::mt19937 rng(11);
    int built = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double scale = 0.3;
        Chain alpha = random_walk(torus, scale, 4 + rng() % 8, rng, static_cast<PointId>(rng() % 64));
        const double half = excess(alpha, torus, scale) / 2;
        Chain beta = alpha;
        for (std::size_t i = 1; i + 1 < beta.count(); ++i) {
            std::vector<PointId> near;
            for (PointId p = 0; p < torus.size(); ++p)
                if (torus(alpha.points[i], p) < half) near.push_back(p);
            beta.points[i] = near[rng() % near.size()];
        }
        auto hh = close_homotopy(alpha, beta, torus, scale);
        CHECK(verify_homotopy(hh, torus).ok);
        CHECK(apply(hh) == beta);
        ++built;
    }
    CHECK(built == 1000);
}

TEST_CASE("normalize") {
    CHECK(normal_steps(1.0, 1.0 / 3) == 7);
    auto c12 = sample_circle(1.0, 12);
    auto single = normalize(Chain{2}, c12, 0.2, 0.5);
    CHECK(single.chain.steps() == normal_steps(0.5, 0.2));
    CHECK(length(single.chain, c12) == 0.0);

    auto torus = sample_flat_torus(1.0 / 3, 1.0 / 3, 10, 10);
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const double eps = 0.25;
        Chain a = random_walk(torus, eps, 39, rng, 0);
        const double budget = length(a, torus);
        auto n = normalize(a, torus, eps, budget);
        CHECK(verify_homotopy(n.certificate, torus).ok);
        CHECK(apply(n.certificate) == n.chain);
        CHECK(n.chain.steps() == normal_steps(budget, eps));
        CHECK(length(n.chain, torus) <= length(a, torus) + 1e-12);
    }
}

TEST_CASE("midpoint refinement") {
    auto c12 = sample_circle(1.0, 12);
    auto r = midpoint_refine(Chain{0, 2}, c12, 0.3, 0.0);
    CHECK(r.chain == Chain{0, 1, 2});
    CHECK(midpoint_refine(Chain{5}, c12, 0.3, 0.0).chain == Chain{5});

    auto c24 = sample_circle(3.0, 24);
    Chain triad{0, 8, 16, 0};
    auto t = midpoint_refine(triad, c24, 1.0 + 1e-9, 1.0 / 8);
    CHECK(t.chain.count() == 7);
    for (std::size_t i = 0; i + 1 < t.chain.count(); ++i)
        CHECK(c24(t.chain.points[i], t.chain.points[i + 1]) <= 0.5 + 1.0 / 24 + 1e-12);
    REQUIRE(t.certificate);
    CHECK(verify_homotopy(*t.certificate, c24).ok);
}

TEST_CASE("rotation witness") {
    auto c12 = sample_circle(1.0, 12);
    Chain loop{0, 2, 4, 6, 8, 10, 0};
    const double eps = 0.25;
    CHECK(rotate(loop, 0, c12, eps).rotated == loop);
    CHECK(rotate(loop, 6, c12, eps).rotated == loop);
    auto r = rotate(loop, 2, c12, eps);
    CHECK(r.rotated == Chain{4, 6, 8, 10, 0, 2, 4});
    CHECK(r.conjugator == Chain{0, 2, 4});
    CHECK(verify_homotopy(r.witness, c12).ok);
    CHECK(apply(r.witness) == concat(concat(r.conjugator, r.rotated), reverse(r.conjugator)));
    CHECK_THROWS_AS(rotate(Chain{0, 1}, 1, c12, eps), Error);
    for (std::ptrdiff_t s = -7; s <= 13; ++s) CHECK(verify_homotopy(rotate(loop, s, c12, eps).witness, c12).ok);
}
