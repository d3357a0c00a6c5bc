#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "escaping/errors.hpp"
#include "escaping/geometry.hpp"
#include "escaping/hairs.hpp"

using namespace escaping;
using geom::Cplx;
using geom::kTwoPi;
using models::Family;
using models::TractLabel;

namespace {

models::LogTransform quarter() {
    return models::make_log_transform({Family::Exponential, {0.25, 0.0}}, 1.0);
}
models::LogTransform tenth() {
    return models::make_log_transform({Family::Exponential, {0.1, 0.0}}, 1.0);
}

double fixed_point(double lambda) {
    double x = 1.0;
    for (int i = 0; i < 80; ++i)
        x -= (std::exp(x) + std::log(lambda) - x) / (std::exp(x) - 1.0);
    return x;
}

sym::OrbitRecord crawl_anchor(const models::LogTransform& lt, double lambda, double eps,
                              int horizon) {
    const auto rec = sym::track_orbit(lt, {fixed_point(lambda) + eps, 0.0}, horizon);
    REQUIRE(rec.verdict == sym::Verdict::Escaping);
    return rec;
}

}  // namespace

TEST_CASE("seed tail curve lies on the spine") {
    const auto lt = quarter();
    const auto c = hairs::seed_tail_curve(lt, {0, 1}, 2.0, 50.0, 200);
    REQUIRE(c.points.size() == 200);
    CHECK(c.points.front().real() == doctest::Approx(2.0));
    CHECK(c.points.back().real() == doctest::Approx(50.0));
    for (const auto& p : c.points) CHECK(p.imag() == doctest::Approx(kTwoPi));
    CHECK_THROWS_AS(hairs::seed_tail_curve(lt, {0, 0}, 0.1, 50.0, 100), DomainError);
}

TEST_CASE("pullback round-trips onto the target carrier") {
    const auto lt = quarter();
    const auto target = hairs::seed_tail_curve(lt, {0, 0}, 2.0, 60.0, 400);
    const geom::Disk far_disk{{-100.0, 0.0}, kTwoPi};
    const auto pulled = hairs::pullback_step(lt, target, {0, 0}, far_disk, 0.05);
    REQUIRE(pulled.points.size() >= 2);
    const geom::PolylineIndex idx(target);
    for (const auto& w : pulled.points) {
        const auto fw = models::eval_F(lt, w, TractLabel{0, 0});
        REQUIRE(!fw.escaped_by_overflow);
        CHECK(idx.distance(fw.value) < 1e-9);
        CHECK(!far_disk.contains(w));
    }
    // mesh bound between consecutive pullback points
    for (std::size_t i = 0; i + 1 < pulled.points.size(); ++i)
        CHECK(std::abs(pulled.points[i + 1] - pulled.points[i]) <= 0.05 + 1e-12);
}

TEST_CASE("pullback cut inserts the exact circle crossing") {
    const auto lt = quarter();
    const auto target = hairs::seed_tail_curve(lt, {0, 0}, 2.0, 60.0, 400);
    // center the disk on the pullback of the near end so the cut engages
    const Cplx w0 = models::inverse_branch(lt, target.points.front(), {0, 0});
    const geom::Disk disk{w0, 1.0};
    const auto pulled = hairs::pullback_step(lt, target, {0, 0}, disk, 0.05);
    REQUIRE(!pulled.points.empty());
    CHECK(std::abs(std::abs(pulled.points.front() - disk.center) - disk.radius) < 1e-9);
    for (const auto& w : pulled.points)
        CHECK(std::abs(w - disk.center) >= disk.radius - 1e-9);
}

TEST_CASE("degenerate cut throws") {
    const auto lt = quarter();
    const auto target = hairs::seed_tail_curve(lt, {0, 0}, 2.0, 60.0, 200);
    const Cplx tail = models::inverse_branch(lt, target.points.back(), {0, 0});
    CHECK_THROWS_AS(hairs::pullback_step(lt, target, {0, 0}, geom::Disk{tail, 50.0}, 0.05),
                    DegenerateCutError);
}

TEST_CASE("inverse branch contracts nearby points by at least 1/2") {
    const auto lt = quarter();
    for (double re = 2.0; re < 40.0; re += 3.7)
        for (double im = -5.0; im < 5.0; im += 1.3) {
            const Cplx a{re, im}, b = a + Cplx{1e-4, 2e-4};
            const Cplx wa = models::inverse_branch(lt, a, {0, 0});
            const Cplx wb = models::inverse_branch(lt, b, {0, 0});
            CHECK(std::abs(wa - wb) <= 0.5 * std::abs(a - b) * (1 + 1e-6));
        }
}

TEST_CASE("hair invariants at moderate depth") {
    const auto lt = quarter();
    const auto anchor = crawl_anchor(lt, 0.25, 1e-9, 30);
    const auto addr = sym::forward_address(anchor);
    const auto hair = hairs::build_hair(lt, addr, anchor, 8);
    REQUIRE(!hair.curves.empty());
    for (std::size_t j = 0; j < hair.curves.size(); ++j) {
        REQUIRE(!hair.curves[j].empty());
        const double d =
            geom::point_to_polyline_distance(hair.anchor_orbit[j], hair.curves[j]);
        CHECK(d <= kTwoPi + hair.mesh);
        CHECK(d >= kTwoPi - 1e-9);
    }
    const auto inv = hairs::check_hair_invariants(lt, hair);
    CHECK(inv.worst_disk_violation <= 1e-9);
    CHECK(inv.worst_boundary_gap <= hair.mesh);
    CHECK(inv.worst_forward_residual <= hair.mesh);
    CHECK(inv.forward_points_checked > 0);

    // depth deltas contract like 2^(1-k)
    for (std::size_t k = 1; k < hair.depth_deltas.size(); ++k)
        CHECK(hair.depth_deltas[k] <= kTwoPi * std::pow(2.0, -static_cast<double>(k)) + 1e-9);
}

TEST_CASE("escape audit certifies the curve points") {
    const auto lt = quarter();
    const auto anchor = crawl_anchor(lt, 0.25, 1e-9, 30);
    const auto hair = hairs::build_hair(lt, sym::forward_address(anchor), anchor, 6);
    const auto audit = hairs::escape_audit(lt, hair, 60, 40);
    CHECK(audit.samples == 60);
    CHECK(audit.fraction == doctest::Approx(1.0));
}

TEST_CASE("same-address hairs from different spine seeds merge") {
    const auto lt = quarter();
    const auto anchor = crawl_anchor(lt, 0.25, 1e-9, 30);
    const auto addr = sym::forward_address(anchor);
    const auto a = hairs::build_hair(lt, addr, anchor, 10);
    const auto b = hairs::build_hair_offset(lt, addr, anchor, 10, Cplx{0.4, 0.25});
    const auto rep = hairs::merge_test(lt, a, b);
    CHECK(rep.merged);
    CHECK(rep.sup_distance <= std::pow(2.0, 1 - 10) * 3.14159265358979 + 2 * a.mesh);
    REQUIRE(rep.per_depth_sup.size() >= 5);
    // decay across depths
    CHECK(rep.per_depth_sup.back() <= rep.per_depth_sup.front() + 1e-12);
}

TEST_CASE("merge test rejects mismatched addresses") {
    const auto lt = quarter();
    const auto anchor = crawl_anchor(lt, 0.25, 1e-9, 30);
    const auto addr = sym::forward_address(anchor);
    const auto rec2 = sym::track_orbit(lt, anchor.seed + Cplx{0.0, kTwoPi}, 30);
    REQUIRE(rec2.verdict == sym::Verdict::Escaping);
    const auto addr2 = sym::forward_address(rec2);
    const auto a = hairs::build_hair(lt, addr, anchor, 2);
    const auto b = hairs::build_hair(lt, addr2, rec2, 2);
    CHECK_THROWS_AS(hairs::merge_test(lt, a, b), DomainError);
}

TEST_CASE("disjoint-type model: boundary infimum and merge certificate") {
    const auto lt = tenth();
    CHECK(hairs::tract_boundary_re_infimum(lt) > 0.1);
    const auto anchor = crawl_anchor(lt, 0.1, 1e-13, 30);
    const auto addr = sym::forward_address(anchor);
    const auto a = hairs::build_hair(lt, addr, anchor, 10);
    const auto b = hairs::build_hair_offset(lt, addr, anchor, 10, Cplx{0.3, 0.2});
    const auto rep = hairs::merge_test(lt, a, b);
    CHECK(rep.disjoint_type);
    CHECK(rep.merged);
}
