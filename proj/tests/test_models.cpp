#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "escaping/errors.hpp"
#include "escaping/models.hpp"

using namespace escaping;
using geom::Cplx;
using geom::kTwoPi;
using models::EntireModel;
using models::Family;
using models::LogTransform;
using models::TractLabel;

namespace {

EntireModel exp_quarter() { return {Family::Exponential, {0.25, 0.0}}; }
EntireModel cosh_half() { return {Family::Cosh, {0.5, 0.0}}; }

// random point safely inside the tract named by label
Cplx sample_tract_point(const LogTransform& lt, const TractLabel& label, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ur(0.0, 1.0);
    const double spine = models::spine_im(lt, label);
    for (;;) {
        const double re = std::max(lt.attraction_threshold, 0.0) + 0.3 + 5.0 * ur(rng);
        const double im = spine + (ur(rng) - 0.5) * 2.0;
        const Cplx w{re, im};
        const auto m = models::tract_membership(lt, w);
        if (m && *m == label) return w;
    }
}

}  // namespace

TEST_CASE("canonical thresholds for the shipped models") {
    const auto lt = models::make_log_transform(exp_quarter(), 1.0);
    CHECK(lt.tract_threshold == doctest::Approx(std::log(4.0)).epsilon(1e-14));
    CHECK(lt.attraction_threshold == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    const auto ct = models::make_log_transform(cosh_half(), 1.0);
    CHECK(ct.tract_threshold == doctest::Approx(std::asinh(2.0)).epsilon(1e-12));
}

TEST_CASE("exponential family requires K above the parameter modulus") {
    CHECK_THROWS_AS(models::make_log_transform({Family::Exponential, {4.0, 0.0}}, 1.0),
                    CertificationError);
}

TEST_CASE("semiconjugacy exp(F(w)) = f_K(exp(w))") {
    std::mt19937_64 rng(101);
    for (const auto& [model, K] : {std::pair{exp_quarter(), 1.0}, {cosh_half(), 1.0},
                                   {exp_quarter(), 8.0}, {cosh_half(), 4.0}}) {
        const auto lt = models::make_log_transform(model, K);
        for (int base = 0; base < lt.num_bases(); ++base)
            for (int i = 0; i < 200; ++i) {
                const TractLabel label{base, i % 3 - 1};
                const Cplx w = sample_tract_point(lt, label, rng);
                const auto fw = models::eval_F(lt, w, label);
                REQUIRE(!fw.escaped_by_overflow);
                const auto fz = models::eval_f_rescaled(lt, std::exp(w));
                if (fz.escaped_by_overflow) continue;  // plane form saturates first at large K
                CHECK(std::abs(std::exp(fw.value) - fz.value) <=
                      1e-12 * std::abs(fz.value));
            }
    }
}

TEST_CASE("derivative matches finite differences") {
    std::mt19937_64 rng(5);
    for (const auto& model : {exp_quarter(), cosh_half()}) {
        const auto lt = models::make_log_transform(model, 1.0);
        for (int base = 0; base < lt.num_bases(); ++base)
            for (int i = 0; i < 50; ++i) {
                const TractLabel label{base, 0};
                const Cplx w = sample_tract_point(lt, label, rng);
                const double h = 1e-6;
                const Cplx fd = (models::eval_F_unchecked(lt, w + Cplx{h, 0}, base).value -
                                 models::eval_F_unchecked(lt, w - Cplx{h, 0}, base).value) /
                                (2 * h);
                const Cplx an = models::eval_F_derivative(lt, w, base);
                CHECK(std::abs(fd - an) <= 1e-5 * (1.0 + std::abs(an)));
            }
    }
}

TEST_CASE("inverse branch round-trips and branch offsets") {
    std::mt19937_64 rng(17);
    // Re zeta >= 2 keeps the preimage in front of the restriction wall
    std::uniform_real_distribution<double> ur(2.0, 40.0);
    for (const auto& model : {exp_quarter(), cosh_half()}) {
        const auto lt = models::make_log_transform(model, 1.0);
        for (int base = 0; base < lt.num_bases(); ++base)
            for (int i = 0; i < 100; ++i) {
                const Cplx zeta{ur(rng), ur(rng) - 20.0};
                const TractLabel label{base, i % 5 - 2};
                const Cplx w = models::inverse_branch(lt, zeta, label);
                const auto m = models::tract_membership(lt, w);
                REQUIRE(m);
                CHECK(*m == label);
                const auto back = models::eval_F(lt, w, label);
                REQUIRE(!back.escaped_by_overflow);
                CHECK(std::abs(back.value - zeta) < 1e-10);
                // neighboring branch differs by exactly 2 pi i
                const Cplx w1 = models::inverse_branch(lt, zeta, {base, label.branch + 1});
                CHECK(std::abs(w1 - w - Cplx{0.0, kTwoPi}) < 1e-10);
            }
    }
}

TEST_CASE("inverse branch requires the right half-plane") {
    const auto lt = models::make_log_transform(exp_quarter(), 1.0);
    CHECK_THROWS_AS(models::inverse_branch(lt, {-1.0, 0.0}, {0, 0}), DomainError);
}

TEST_CASE("tract membership and spines") {
    const auto lt = models::make_log_transform(exp_quarter(), 1.0);
    // far along the spine of branch m
    for (int m = -2; m <= 2; ++m) {
        const auto label = models::tract_membership(lt, {5.0, m * kTwoPi});
        REQUIRE(label);
        CHECK(label->base == 0);
        CHECK(label->branch == m);
    }
    // between tracts (Re e^w < t) there is no membership
    CHECK(!models::tract_membership(lt, {5.0, kTwoPi / 2}));
    // behind the restriction wall there is no membership
    CHECK(!models::tract_membership(lt, {0.1, 0.0}));

    const auto ct = models::make_log_transform(cosh_half(), 1.0);
    const auto left = models::tract_membership(ct, {5.0, kTwoPi / 2});
    REQUIRE(left);
    CHECK(left->base == 1);
    CHECK(models::spine_im(ct, *left) == doctest::Approx(kTwoPi / 2));
}

TEST_CASE("eval_F flags overflow instead of producing inf") {
    const auto lt = models::make_log_transform(exp_quarter(), 1.0);
    const auto r = models::eval_F_unchecked(lt, {800.0, 0.0}, 0);
    CHECK(r.escaped_by_overflow);
    CHECK(r.exponent_re > models::kOverflowRe);
}

TEST_CASE("expansion certificate") {
    const auto lt = models::make_log_transform(exp_quarter(), 1.0);
    const auto rep = models::certify_expansion(lt, 2000);
    CHECK(rep.certified);
    CHECK(rep.analytic_bound == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.min_observed >= rep.analytic_bound - 1e-9);

    // shrinking the wall below the certified restriction loses the bound
    auto loose = lt;
    loose.attraction_threshold = -3.0;
    const auto bad = models::certify_expansion(loose, 2000);
    CHECK(!bad.certified);
    CHECK(bad.min_observed < 2.0);
}

TEST_CASE("plane tract membership implies |f_K| > 1") {
    // the exponential inequality is exact; the cosh one is the uniform-in-Im
    // sufficient condition, so only the forward implication is universal
    for (const auto& model : {exp_quarter(), cosh_half()}) {
        const auto lt = models::make_log_transform(model, 1.0);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-6.0, 6.0);
        for (int i = 0; i < 500; ++i) {
            const Cplx z{u(rng), u(rng)};
            const auto fz = models::eval_f_rescaled(lt, z);
            if (fz.escaped_by_overflow) continue;
            const double mag = std::abs(fz.value);
            if (std::abs(mag - 1.0) < 1e-3) continue;  // skip the boundary
            if (models::plane_tract_membership(lt, z)) CHECK(mag > 1.0);
            if (model.family == Family::Exponential)
                CHECK(models::plane_tract_membership(lt, z) == (mag > 1.0));
        }
    }
}
