#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "escaping/errors.hpp"
#include "escaping/symbolic.hpp"

using namespace escaping;
using geom::Cplx;
using geom::kTwoPi;
using models::EntireModel;
using models::Family;
using models::TractLabel;

namespace {

models::LogTransform quarter_k1() {
    return models::make_log_transform({Family::Exponential, {0.25, 0.0}}, 1.0);
}
models::LogTransform quarter_k8() {
    return models::make_log_transform({Family::Exponential, {0.25, 0.0}}, 8.0);
}

// repelling fixed point of F(x) = e^x + ln(1/4) on the real axis
double log_fixed_point() {
    double x = 0.77;
    for (int i = 0; i < 80; ++i)
        x -= (std::exp(x) + std::log(0.25) - x) / (std::exp(x) - 1.0);
    return x;
}

}  // namespace

TEST_CASE("crawling orbit near the repelling fixed point escapes by overflow") {
    const auto lt = quarter_k1();
    const auto rec = sym::track_orbit(lt, {log_fixed_point() + 1e-9, 0.0}, 40);
    CHECK(rec.verdict == sym::Verdict::Escaping);
    CHECK(rec.escaped_by_overflow);
    CHECK(rec.steps.size() >= 25);
    for (const auto& s : rec.steps) REQUIRE(s.tract);
}

TEST_CASE("horizon 1 cannot certify escape") {
    const auto lt = quarter_k1();
    const auto rec = sym::track_orbit(lt, {log_fixed_point() + 1e-9, 0.0}, 1);
    CHECK(rec.verdict == sym::Verdict::Inconclusive);
}

TEST_CASE("orbit leaving every tract is Bounded") {
    const auto lt = quarter_k1();
    // a seed whose image lands between the tracts (Im far from 2 pi Z)
    const auto rec2 = sym::track_orbit(lt, {1.2, 0.4}, 10);
    CHECK(rec2.verdict == sym::Verdict::Bounded);
}

TEST_CASE("shift equivariance of the forward address") {
    const auto lt = quarter_k1();
    const Cplx seed{log_fixed_point() + 1e-9, 0.0};
    const auto rec = sym::track_orbit(lt, seed, 30);
    REQUIRE(rec.verdict == sym::Verdict::Escaping);
    const auto addr = sym::forward_address(rec);
    const auto step = models::eval_F_unchecked(lt, seed, 0);
    const auto rec1 = sym::track_orbit(lt, step.value, 29);
    REQUIRE(rec1.verdict == sym::Verdict::Escaping);
    const auto addr1 = sym::forward_address(rec1);
    const auto shifted = sym::shift(addr);
    REQUIRE(addr1.labels.size() == shifted.labels.size());
    for (std::size_t i = 0; i < shifted.labels.size(); ++i)
        CHECK(addr1.labels[i] == shifted.labels[i]);
}

TEST_CASE("2 pi i translate of the seed shifts only the first label") {
    const auto lt = quarter_k1();
    const Cplx seed{log_fixed_point() + 1e-9, 0.0};
    const auto a = sym::forward_address(sym::track_orbit(lt, seed, 35));
    const auto b = sym::forward_address(sym::track_orbit(lt, seed + Cplx{0.0, kTwoPi}, 35));
    REQUIRE(a.labels.size() == b.labels.size());
    CHECK(b.labels[0].branch == a.labels[0].branch + 1);
    for (std::size_t i = 1; i < a.labels.size(); ++i) CHECK(a.labels[i] == b.labels[i]);
}

TEST_CASE("period detection") {
    sym::ExternalAddress a;
    for (int i = 0; i < 8; ++i) a.labels.push_back({0, i % 2});
    a.horizon = 8;
    CHECK(sym::detect_period(a) == 2);
    sym::ExternalAddress c;
    for (int i = 0; i < 8; ++i) c.labels.push_back({0, 0});
    c.horizon = 8;
    CHECK(sym::detect_period(c) == 1);
    sym::ExternalAddress n;
    n.labels = {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}};
    n.horizon = 6;
    CHECK(!sym::detect_period(n));
}

TEST_CASE("backward extension for an orbit entering the tracts late") {
    const auto lt = quarter_k8();
    // plane orbit of f_K from 0.3: the first two points are below the plane
    // tract threshold ln(32)/8
    std::vector<Cplx> orbit{{0.3, 0.0}};
    for (int n = 0; n < 10; ++n) {
        const auto r = models::eval_f_rescaled(lt, orbit.back());
        if (r.escaped_by_overflow) break;
        orbit.push_back(r.value);
    }
    REQUIRE(orbit.size() >= 5);
    int k0 = static_cast<int>(orbit.size());
    while (k0 > 0 && models::plane_tract_membership(lt, orbit[k0 - 1])) --k0;
    CHECK(k0 == 2);

    const auto addr = sym::backward_extend_address(lt, orbit, k0);
    REQUIRE(addr.labels.size() >= orbit.size() - 1);
    // a real positive orbit lifts onto the real axis: base 0, branch 0
    for (const auto& l : addr.labels) CHECK(l == TractLabel{0, 0});

    // independence of the split point on the overlap
    const auto addr3 = sym::backward_extend_address(lt, orbit, k0 + 1);
    for (std::size_t i = k0 + 1; i < std::min(addr.labels.size(), addr3.labels.size()); ++i)
        CHECK(addr.labels[i] == addr3.labels[i]);
}

TEST_CASE("backward extension with k0 = 0 matches the forward address") {
    const auto lt = quarter_k8();
    std::vector<Cplx> orbit{{0.5, 0.0}};
    for (int n = 0; n < 10; ++n) {
        const auto r = models::eval_f_rescaled(lt, orbit.back());
        if (r.escaped_by_overflow) break;
        orbit.push_back(r.value);
    }
    for (const auto& z : orbit) REQUIRE(models::plane_tract_membership(lt, z));
    const auto addr = sym::backward_extend_address(lt, orbit, 0);
    const auto rec = sym::track_orbit(lt, std::log(orbit[0]), static_cast<int>(orbit.size()));
    for (std::size_t i = 0; i < std::min<std::size_t>(addr.labels.size(), rec.steps.size());
         ++i) {
        REQUIRE(rec.steps[i].tract);
        CHECK(addr.labels[i] == *rec.steps[i].tract);
    }
}

TEST_CASE("backward extension validates plane membership") {
    const auto lt = quarter_k8();
    std::vector<Cplx> orbit{{0.3, 0.0}, {0.3446, 0.0}};
    CHECK_THROWS_AS(sym::backward_extend_address(lt, orbit, 0), DomainError);
}

TEST_CASE("unbounded component test") {
    const auto lt = quarter_k1();
    bool heur = true;
    CHECK(sym::in_unbounded_tract_component(lt, {5.0, 0.0}, &heur));
    CHECK(!heur);  // wall already in the right half-plane
    CHECK(!sym::in_unbounded_tract_component(lt, {0.5, 0.0}));

    const auto lt8 = quarter_k8();
    CHECK(sym::in_unbounded_tract_component(lt8, {5.0, 0.0}, &heur));
    CHECK(heur);  // negative wall: the spine-ray connection was sampled
}
