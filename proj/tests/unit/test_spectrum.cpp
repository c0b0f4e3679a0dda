#include <cmath>

#include "doctest.h"
#include "disco/error.hpp"
#include "disco/spectrum.hpp"

using namespace disco;

namespace {

PointId torus_id(std::size_t nx, std::size_t ny, std::size_t i, std::size_t j) {
    return static_cast<PointId>((i % nx) + nx * (j % ny));
}

SpectrumOptions clamped() {
    SpectrumOptions o;
    o.resolution = ResolutionPolicy::Clamp;
    return o;
}

}  // namespace

TEST_CASE("candidate scales") {
    auto two = from_distance_matrix({{0, 0.7}, {0.7, 0}});
    CHECK(candidate_scales(two, 0.1) == std::vector<double>{0.7});

    auto c12 = sample_circle(1.0, 12);
    auto all = candidate_scales(c12, 0.05);
    REQUIRE(all.size() == 6);
    for (std::size_t k = 0; k < 6; ++k) CHECK(all[k] == doctest::Approx((k + 1) / 12.0));
    CHECK(candidate_scales(c12, 0.2).size() == 4);
    CHECK_THROWS_AS(candidate_scales(c12, 0.0), Error);
}

TEST_CASE("H1 persistence") {
    auto path = sample_path(2.0, 0.25);
    CHECK(persistent_h1(path, candidate_scales(path, 0.1)).empty());

    auto c24 = sample_circle(1.0, 24);
    auto iv = persistent_h1(c24, candidate_scales(c24, 0.01));
    REQUIRE(iv.size() == 1);
    CHECK(iv[0].birth == doctest::Approx(1.0 / 24));
    CHECK(std::abs(iv[0].death - 1.0 / 3) <= 2.0 / 24);

    auto t = sample_flat_torus(1.0 / 3, 1.0 / 2, 12, 18);
    std::vector<double> scales;
    for (double s : candidate_scales(t, 0.05))
        if (s < 0.56) scales.push_back(s);
    auto ti = persistent_h1(t, scales);
    std::vector<double> long_lived;
    for (const auto& x : ti)
        if (x.death - x.birth > 0.1) long_lived.push_back(x.death);
    REQUIRE(long_lived.size() == 2);
    std::sort(long_lived.begin(), long_lived.end());
    const double h = t.resolution();
    CHECK(std::abs(long_lived[0] - 1.0 / 3) <= 2 * h);
    CHECK(std::abs(long_lived[1] - 1.0 / 2) <= 2 * h);
}

TEST_CASE("essential triads") {
    auto c3 = sample_circle(3.0, 24);
    CHECK(find_essential_triads(c3, 2.0, 0.125).empty());

    auto triads = find_essential_triads(c3, 1.0, 0.125);
    REQUIRE_FALSE(triads.empty());
    for (const auto& t : triads) {
        CHECK(t.essential == Essential::Yes);
        CHECK(t.tolerance <= 0.125 + 1e-12);
        CHECK(is_eps_chain(t.refined_loop, c3, 1.0));
        REQUIRE(t.h1);
        CHECK_FALSE(t.h1->zero());
    }

    // S_3: essential triads use two distinct edges; a triad inside one edge
    // and its neighbourhood is inessential.
    auto s3 = sample_multiedge(3, 1.5, 0.125);
    TriadSearchOptions no_prune;
    no_prune.prune = false;
    auto st = find_essential_triads(s3, 1.0, 0.125, {}, no_prune);
    std::size_t essential = 0, inessential = 0;
    for (const auto& t : st) (t.essential == Essential::Yes ? essential : inessential)++;
    CHECK(essential > 0);
    CHECK(inessential > 0);
}

TEST_CASE("triad classes") {
    auto c3 = sample_circle(3.0, 24);
    NullDecider dec(c3, 1.0);
    auto triads = find_essential_triads(dec, 0.125);
    auto single = triad_equivalence_classes({triads.front()}, dec);
    CHECK(single.classes.size() == 1);
    // Every triad on the one essential circle is equivalent.
    auto part = triad_equivalence_classes(triads, dec);
    CHECK(part.classes.size() == 1);
    CHECK(part.unresolved.empty());

    auto s3 = sample_multiedge(3, 1.5, 0.125);
    NullDecider d3(s3, 1.0);
    std::vector<Triad> ess;
    for (auto& t : find_essential_triads(d3, 0.125))
        if (t.essential == Essential::Yes) ess.push_back(t);
    CHECK(triad_equivalence_classes(ess, d3).classes.size() == 3);
}

TEST_CASE("pruning agrees with the exhaustive partition") {
    auto s3 = sample_multiedge(3, 1.5, 0.25);
    NullDecider d3(s3, 1.0);
    TriadSearchOptions no_prune;
    no_prune.prune = false;
    std::vector<Triad> ess;
    for (auto& t : find_essential_triads(d3, 0.0, no_prune))
        if (t.essential == Essential::Yes) ess.push_back(t);
    REQUIRE(ess.size() <= 12);
    REQUIRE(ess.size() >= 3);
    // Exhaustive: union over every pair that is freely homotopic.
    std::vector<std::size_t> label(ess.size());
    for (std::size_t i = 0; i < ess.size(); ++i) {
        label[i] = i;
        for (std::size_t j = 0; j < i; ++j)
            if (free_homotopic(ess[j].refined_loop, ess[i].refined_loop, d3, true).verdict == FreeVerdict::Yes) {
                label[i] = label[j];
                break;
            }
    }
    std::sort(label.begin(), label.end());
    const auto exhaustive = static_cast<std::size_t>(std::unique(label.begin(), label.end()) - label.begin());
    CHECK(triad_equivalence_classes(ess, d3).classes.size() == exhaustive);
}

TEST_CASE("spectrum of a circle and a tree") {
    auto c24 = sample_circle(1.0, 24);
    CHECK_THROWS_AS(compute_spectrum(c24, 0.1), ResolutionTooCoarse);
    auto rep = compute_spectrum(c24, 0.1, clamped());
    REQUIRE(rep.critical_values.size() == 1);
    CHECK(std::abs(rep.critical_values[0].epsilon - 1.0 / 3) <= 2.0 / 24);
    CHECK(rep.critical_values[0].multiplicity == 1);
    CHECK_FALSE(rep.critical_values[0].evidence.empty());
    REQUIRE(rep.systole_estimate);
    CHECK(*rep.systole_estimate == doctest::Approx(1.0).epsilon(0.2));
    // Every representative is not null at its scale and null just above.
    for (const auto& t : rep.critical_values[0].classes) {
        CHECK(decide_null(t.refined_loop, c24, t.scale).verdict == Verdict::NotNull);
        CHECK(decide_null(t.refined_loop, c24, t.scale + c24.resolution() / 2).verdict == Verdict::Null);
    }
    // Raising eps_min keeps values above it.
    auto higher = compute_spectrum(c24, 0.3, clamped());
    REQUIRE(higher.critical_values.size() == 1);
    CHECK(higher.critical_values[0].epsilon == rep.critical_values[0].epsilon);

    auto tree = from_weighted_graph(4, {{0, 1, 1.0}, {1, 2, 1.0}, {1, 3, 0.5}}, 0.125);
    CHECK(compute_spectrum(tree, 0.4).critical_values.empty());
}

TEST_CASE("spectrum of graphs") {
    auto s3 = compute_spectrum(sample_multiedge(3, 1.5, 0.125), 0.375);
    REQUIRE(s3.critical_values.size() == 1);
    CHECK(std::abs(s3.critical_values[0].epsilon - 1.0) <= 0.25);
    CHECK(s3.critical_values[0].multiplicity == 3);

    auto tet = compute_spectrum(sample_simplex_skeleton(4, 1.0, 0.125), 0.375);
    REQUIRE(tet.critical_values.size() == 1);
    CHECK(std::abs(tet.critical_values[0].epsilon - 1.0) <= 0.25);
    CHECK(tet.critical_values[0].multiplicity == 4);
}

TEST_CASE("metric embedding") {
    auto c3 = sample_circle(3.0, 24);
    auto r = check_metric_embedding(std::array<PointId, 3>{0, 8, 16}, c3);
    CHECK(r.discrepancy == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.embedded);
    CHECK(r.circle_length == doctest::Approx(3.0));

    auto sq = sample_flat_torus(1.0 / 3, 1.0 / 3, 12, 12);
    auto id = [](std::size_t i, std::size_t j) { return torus_id(12, 12, i, j); };
    Chain slope, diag, axis;
    for (std::size_t t = 0; t <= 12; ++t) {
        slope.points.push_back(id(2 * t, t));
        diag.points.push_back(id(t, t));
        axis.points.push_back(id(t, 3));
    }
    auto rs = check_metric_embedding(slope, sq);
    CHECK_FALSE(rs.embedded);
    CHECK(rs.discrepancy == doctest::Approx(std::sqrt(5.0) / 2 - 0.5).epsilon(1e-9));
    CHECK(check_metric_embedding(diag, sq).embedded);
    CHECK(check_metric_embedding(axis, sq).embedded);

    // Two tight clusters far apart: no near-geodesic chain joins them.
    auto gapped = from_distance_matrix(
        {{0, 0.1, 1, 1.05}, {0.1, 0, 1.05, 1}, {1, 1.05, 0, 0.1}, {1.05, 1, 0.1, 0}});
    CHECK_THROWS_AS(check_metric_embedding(std::array<PointId, 3>{0, 2, 1}, gapped), Error);
}
