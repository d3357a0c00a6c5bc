#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "escaping/errors.hpp"
#include "escaping/lemmas.hpp"

using namespace escaping;
using geom::Cplx;
using geom::kTwoPi;

TEST_CASE("straight strip below 2 pi is translate-disjoint; tall one is not") {
    auto thin = lemmas::make_tall_control(4.0);
    CHECK(lemmas::certify_translate_disjoint(thin));
    auto tall = lemmas::make_tall_control(8.0);
    CHECK(!lemmas::certify_translate_disjoint(tall));
}

TEST_CASE("point-in-polygon basics") {
    const auto strip = lemmas::make_tall_control(4.0);
    CHECK(lemmas::inside_tract(strip, {10.0, 0.0}));
    CHECK(lemmas::inside_tract(strip, {10.0, 1.9}));
    CHECK(!lemmas::inside_tract(strip, {10.0, 2.1}));
    CHECK(!lemmas::inside_tract(strip, {1.0, 0.0}));
    CHECK(strip.max_re() == doctest::Approx(30.0));
}

TEST_CASE("separation holds trivially on a straight thin strip") {
    const auto strip = lemmas::make_tall_control(4.0);
    const auto v = lemmas::separation_check(strip, {20.0, 0.0}, 10.0, 0.1);
    CHECK(v.resolved);
    CHECK(v.in_unbounded_re_component);
    CHECK(v.tilde_contained);
}

TEST_CASE("serpentine generator is reproducible and certified") {
    const auto s1 = lemmas::make_serpentine(42);
    const auto s2 = lemmas::make_serpentine(42);
    REQUIRE(s1.tract.boundary.points.size() == s2.tract.boundary.points.size());
    for (std::size_t i = 0; i < s1.tract.boundary.points.size(); ++i)
        CHECK(s1.tract.boundary.points[i] == s2.tract.boundary.points[i]);
    CHECK(s1.tract.period_disjoint);
    CHECK(s1.u_turns >= 1);
    CHECK(s1.u_turns <= 4);
    // the spine runs inside the tract
    for (const Cplx& p : s1.corridor_spine) CHECK(lemmas::inside_tract(s1.tract, p));
    // total vertical extent below 2 pi
    double lo = 1e300, hi = -1e300;
    for (const Cplx& p : s1.tract.boundary.points) {
        lo = std::min(lo, p.imag());
        hi = std::max(hi, p.imag());
    }
    CHECK(hi - lo < kTwoPi);
}

TEST_CASE("doubled-back finger is separated from the unbounded Re-component") {
    const auto s = lemmas::make_serpentine(7);
    REQUIRE(s.u_turns >= 1);
    // a spine point on the second corridor, right of R
    const Cplx z = s.corridor_spine[3] - (s.corridor_spine[3] - s.corridor_spine[2]) * 0.25;
    REQUIRE(lemmas::inside_tract(s.tract, z));
    const auto v = lemmas::separation_check(s.tract, z, 12.0, s.corridor_height / 16.0);
    CHECK(v.resolved);
    CHECK(!v.in_unbounded_re_component);  // the way back crosses Re < R
    CHECK(v.tilde_contained);
}

TEST_CASE("grid halving does not change the verdict") {
    const auto s = lemmas::make_serpentine(99);
    const Cplx z = s.corridor_spine[0] - Cplx{2.0, 0.0};
    const auto v1 = lemmas::separation_check(s.tract, z, 12.0, s.corridor_height / 8.0);
    const auto v2 = lemmas::separation_check(s.tract, z, 12.0, s.corridor_height / 16.0);
    CHECK(v1.resolved);
    CHECK(v2.resolved);
    CHECK(v1.in_unbounded_re_component == v2.in_unbounded_re_component);
    CHECK(v1.tilde_contained == v2.tilde_contained);
}

TEST_CASE("proximity inside a corridor and rejection outside") {
    const auto s = lemmas::make_serpentine(5);
    geom::Polyline c0;
    c0.points = s.corridor_spine;
    std::reverse(c0.points.begin(), c0.points.end());
    geom::Polyline c1;
    const double y = s.corridor_spine[0].imag() + s.corridor_height / 4.0;
    c1.points = {{s.corridor_spine[1].real() + 0.2, y}, {29.9, y}};
    const auto v = lemmas::proximity_check(s.tract, c0, c1);
    CHECK(v.within_2pi);
    CHECK(std::min(v.sup0, v.sup1) <= kTwoPi);

    geom::Polyline outside;
    outside.points = {{10.0, 20.0}, {30.0, 20.0}};
    CHECK_THROWS_AS(lemmas::proximity_check(s.tract, c0, outside), DomainError);
}

TEST_CASE("tall control produces designed violations") {
    const auto control = lemmas::make_tall_control(8.0);
    // z near the top: the blocking segment leaves the bottom of the strip
    // open, so the unbounded complement component reaches Re < R
    const auto v = lemmas::separation_check(control, {20.0, 3.5}, 10.0, 0.1);
    CHECK(v.resolved);
    CHECK(v.in_unbounded_re_component);
    CHECK(!v.tilde_contained);

    geom::Polyline top, bottom;
    top.points = {{3.0, 3.6}, {29.9, 3.6}};
    bottom.points = {{3.0, -3.6}, {29.9, -3.6}};
    const auto p = lemmas::proximity_check(control, top, bottom);
    CHECK(!p.within_2pi);
}

TEST_CASE("short campaign: no counterexamples, control violated") {
    const auto rep = lemmas::run_campaign(25, 2024);
    CHECK(static_cast<int>(rep.trials.size()) == 25);
    CHECK(rep.separation_counterexamples == 0);
    CHECK(rep.proximity_counterexamples == 0);
    CHECK(rep.unresolved == 0);
    CHECK(rep.control_violated);
}
