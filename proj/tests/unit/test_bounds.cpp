#include <random>

#include "doctest.h"
#include "disco/bounds.hpp"
#include "disco/error.hpp"

using namespace disco;

namespace {

double as_double(const BigReal& x) { return x.convert_to<double>(); }

}  // namespace

TEST_CASE("bound formulas") {
    CHECK(as_double(gromov_generator_bound(0.5, 0.5, 1, 1)) == doctest::Approx(16));
    CHECK(as_double(ngmv3_bound(0.5, 0.5, 1, 1)) == doctest::Approx(16));
    CHECK(as_double(counting_bound(0.3, 0.3, 5)) == doctest::Approx(625));
    for (double L : {0.1, 1.0, 7.0}) CHECK(as_double(counting_bound(L, 0.2, 1)) == 1.0);
    CHECK(as_double(gromov_systole_bound(1.0, 1.0, 1)) == doctest::Approx(16));
    CHECK_THROWS_AS(ngmv3_bound(1, 1, 0, 2), Error);
    CHECK_THROWS_AS(counting_bound(-1, 1, 2), Error);

    // Far beyond double range.
    const BigReal huge = gromov_generator_bound(10, 0.01, 1, 50);
    CHECK(huge > BigReal(1e300));
    BoundReport r = make_bound_report("x", {}, huge, 3);
    CHECK(r.satisfied);
    CHECK(r.bound_text().find('e') != std::string::npos);
}

TEST_CASE("bounds never sit below the exact value") {
    // 2^10 exactly: the nudged value is at least 1024.
    CHECK(counting_bound(2.5, 1.0, 2) >= BigReal(1024));
    CHECK(counting_bound(2.5, 1.0, 2) < BigReal(1024.000001));
}

TEST_CASE("counting bound is monotone") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.05, 3.0);
    for (int t = 0; t < 200; ++t) {
        const double L1 = u(rng), L2 = L1 + u(rng), eps = u(rng);
        const double c = 1 + static_cast<double>(rng() % 20);
        CHECK(counting_bound(L1, eps, c) <= counting_bound(L2, eps, c));
        CHECK(counting_bound(L1, eps, c) <= counting_bound(L1, eps, c + 1));
    }
}

TEST_CASE("satisfied within relative tolerance") {
    CHECK(make_bound_report("a", {}, BigReal(10), 10).satisfied);
    CHECK(make_bound_report("a", {}, BigReal(10), 10 * (1 + 5e-10)).satisfied);
    CHECK_FALSE(make_bound_report("a", {}, BigReal(10), 10.001).satisfied);
}

TEST_CASE("triad count bound") {
    auto three = from_distance_matrix({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
    auto tb = triad_count_bound(three, 1.5);
    CHECK(tb.cover_count == 3);
    CHECK(as_double(tb.value) == 1.0);

    auto s3 = sample_multiedge(3, 1.5, 0.125);
    auto sb = triad_count_bound(s3, 1.0);
    CHECK(sb.value >= BigReal(3));
    CHECK(sb.cover_count <= 8);
}

TEST_CASE("systole from a spectrum") {
    SpectrumReport empty;
    CHECK_THROWS_AS(systole_bounds(empty), Error);

    SpectrumOptions o;
    o.resolution = ResolutionPolicy::Clamp;
    auto rep = compute_spectrum(sample_circle(1.0, 24), 0.1, o);
    auto sb = systole_bounds(rep);
    CHECK(sb.sigma_estimate == doctest::Approx(1.0).epsilon(0.15));
    CHECK(sb.consistent);
}

TEST_CASE("bounds table on the circle") {
    auto c = sample_circle(1.0, 24);
    SpectrumOptions o;
    o.resolution = ResolutionPolicy::Clamp;
    auto rep = compute_spectrum(c, 0.1, o);
    auto table = evaluate_bounds(c, rep);
    REQUIRE(table.size() == 7);
    for (const auto& r : table) {
        INFO(r.name);
        CHECK(r.satisfied);
    }
    // Empirical generator count of the circle group is one.
    CHECK(table[3].name == "gromov_generator_bound");
    CHECK(table[3].empirical == 1.0);
    // Gamma at eps = 1/6, L = 1.5: windings -1, 0, 1.
    CHECK(table[1].empirical == 3.0);
}
