#include "escaping/normalization.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "escaping/errors.hpp"

namespace escaping::norm {

namespace {
constexpr double kBlowup = 1e100;
constexpr int kSettleRun = 20;
}  // namespace

bool PostsingularReport::all_converged() const {
    return !orbits.empty() &&
           std::all_of(orbits.begin(), orbits.end(),
                       [](const Orbit& o) { return o.converged; });
}

PostsingularReport postsingular_orbit(const EntireModel& model, int horizon,
                                      double settle_tol) {
    if (horizon < 1) throw DomainError("postsingular_orbit: horizon must be >= 1");
    PostsingularReport rep;
    for (const Cplx& sv : model.singular_values()) {
        PostsingularReport::Orbit orbit;
        orbit.singular_value = sv;
        Cplx z = sv;
        orbit.points.push_back(z);
        int quiet = 0;
        for (int n = 0; n < horizon; ++n) {
            const auto r = models::eval_f(model, z);
            if (r.escaped_by_overflow || std::abs(r.value) > kBlowup) {
                orbit.unbounded_evidence = true;
                break;
            }
            const Cplx next = r.value;
            quiet = (std::abs(next - z) < settle_tol) ? quiet + 1 : 0;
            z = next;
            orbit.points.push_back(z);
            if (quiet >= kSettleRun) {
                orbit.converged = true;
                break;
            }
        }
        for (const Cplx& p : orbit.points)
            rep.bound_radius = std::max(rep.bound_radius, std::abs(p));
        rep.orbits.push_back(std::move(orbit));
    }
    return rep;
}

bool rescaled_postsingular_inside_half_disk(const LogTransform& lt,
                                            const PostsingularReport& report) {
    for (const auto& orbit : report.orbits)
        for (const Cplx& p : orbit.points)
            if (std::abs(p) / lt.scale_K > 0.5) return false;
    return true;
}

LogTransform choose_rescaling(const EntireModel& model, const PostsingularReport& report) {
    if (!report.all_converged())
        throw DomainError("choose_rescaling: postsingular report not fully converged");
    double K = std::max(1.0, 2.0 * report.bound_radius);
    for (int attempt = 0; attempt <= 60; ++attempt, K *= 2.0) {
        LogTransform lt;
        try {
            lt = models::make_log_transform(model, K);
        } catch (const CertificationError&) {
            continue;  // tract inequality degenerate at this K
        }
        if (!rescaled_postsingular_inside_half_disk(lt, report)) continue;
        if (!models::certify_expansion(lt, 1000).certified) continue;
        return lt;
    }
    throw CertificationError("choose_rescaling: doubling search exceeded 2^60");
}

bool verify_W_preimage(const LogTransform& lt, int samples) {
    // |f_K(exp w)| = exp(Re F(w)), so the check is Re F(w) > 0.
    std::mt19937_64 gen(0xabcdef12345);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double log_t = std::log(lt.tract_threshold);
    for (int i = 0; i < samples; ++i) {
        const int base = (lt.num_bases() == 2 && (i & 1)) ? 1 : 0;
        const double x = lt.attraction_threshold + 1e-9 + 6.0 * unif(gen);
        const double range = std::acos(std::exp(std::min(-1e-12, log_t - x)));
        const double local = range * (2.0 * unif(gen) - 1.0) * 0.999999;
        const Cplx w{x, models::spine_im(lt, models::TractLabel{base, 0}) + local};
        if (!models::tract_membership(lt, w)) continue;
        const auto r = models::eval_F_unchecked(lt, w, base);
        if (r.escaped_by_overflow) continue;  // astronomically inside W
        if (!(r.value.real() > 0.0)) return false;
    }
    return true;
}

}  // namespace escaping::norm
