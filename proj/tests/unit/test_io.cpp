#include <sstream>

#include "doctest.h"
#include "disco/io.hpp"

using namespace disco;

TEST_CASE("chain and homotopy round-trip bit-exactly") {
    auto c = sample_circle(1.0, 24);
    const double eps = 1.0 / 3.0 + 1e-13;
    Chain loop{0, 3, 6, 9, 6, 3, 0};
    auto v = decide_null(loop, c, eps);
    REQUIRE(v.certificate);
    const Homotopy& h = *v.certificate;
    const auto text = dump(to_json(h));
    const Homotopy back = homotopy_from_json(json::parse(text));
    CHECK(back == h);
    CHECK(back.scale == eps);
    CHECK(dump(to_json(back)) == text);
    CHECK(verify_homotopy(back, c).ok);

    CHECK(chain_from_json(json::parse("[1,2,3]")) == Chain{1, 2, 3});
    CHECK_THROWS_AS(chain_from_json(json::parse("[1,-2]")), Error);
    CHECK_THROWS_AS(chain_from_json(json::parse("{\"a\":1}")), Error);
    CHECK_THROWS_AS(homotopy_from_json(json::parse(R"({"start":[0],"scale":1,"moves":[{"op":"x","pos":1}]})")),
                    Error);
}

TEST_CASE("move encoding") {
    Homotopy h;
    h.start = Chain{0, 1};
    h.scale = 0.5;
    h.moves = {BasicMove::insert(1, 7), BasicMove::remove(1)};
    CHECK(to_json(h).dump() ==
          R"({"moves":[{"op":"ins","point":7,"pos":1},{"op":"del","pos":1}],"scale":0.5,"start":[0,1]})");
}

TEST_CASE("infinite reals") {
    CHECK(real_to_json(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(std::isinf(real_from_json(json("inf"))));
    CHECK(real_from_json(json(0.1)) == 0.1);
}

TEST_CASE("reports serialize deterministically") {
    auto c = sample_circle(1.0, 24);
    SpectrumOptions o;
    o.resolution = ResolutionPolicy::Clamp;
    auto r1 = compute_spectrum(c, 0.1, o);
    auto r2 = compute_spectrum(c, 0.1, o);
    CHECK(dump(to_json(r1)) == dump(to_json(r2)));
    const auto j = to_json(r1);
    CHECK(j["critical_values"].size() == 1);
    std::ostringstream csv;
    write_spectrum_csv(csv, r1);
    CHECK(csv.str().rfind("scale,multiplicity\n", 0) == 0);

    NullDecider d(c, 0.15);
    auto cover = build_cover(d.chassis(), 2.0);
    auto cj = to_json(cover, 2.0);
    CHECK(cj["base_fiber"].size() == 5);
    CHECK(cj["adjacency"].size() == cover.size());
    auto pj = to_json(d.presentation());
    CHECK(pj["generators"].size() == d.presentation().generators.size());
    REQUIRE(d.simplified());
    CHECK(to_json(*d.simplified())["alive"].size() == 1);
}
