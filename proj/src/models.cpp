#include "escaping/models.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "escaping/errors.hpp"

namespace escaping::models {

namespace {

using geom::kTwoPi;

constexpr double kPi = 3.14159265358979323846264338327950288;

Cplx log1p_c(const Cplx& z) {
    if (std::abs(z) < 1e-4) {
        const Cplx z2 = z * z;
        return z - 0.5 * z2 + z2 * z / 3.0 - 0.25 * z2 * z2;
    }
    return std::log(1.0 + z);
}

// Splits Im w into a 2*pi*i branch index and local offset in [-pi, pi).
void split_branch(double im, int& branch, double& local) {
    branch = static_cast<int>(std::lround(im / kTwoPi));
    local = im - kTwoPi * branch;
}

// Principal log of the branch constant lambda/K resp. a/(2K).
Cplx branch_constant(const LogTransform& lt) {
    if (lt.model.family == Family::Exponential)
        return std::log(lt.model.parameter / lt.scale_K);
    return std::log(lt.model.parameter / (2.0 * lt.scale_K));
}

}  // namespace

std::vector<Cplx> EntireModel::singular_values() const {
    if (family == Family::Exponential) return {Cplx{0.0, 0.0}};
    return {parameter, -parameter};
}

std::string to_string(const TractLabel& t) {
    return std::to_string(t.base) + ":" + std::to_string(t.branch);
}

LogTransform make_log_transform(const EntireModel& model, double scale_K) {
    if (scale_K <= 0.0) throw DomainError("make_log_transform: scale_K must be positive");
    const double p = std::abs(model.parameter);
    if (p == 0.0) throw DomainError("make_log_transform: parameter must be nonzero");
    LogTransform lt;
    lt.model = model;
    lt.scale_K = scale_K;
    if (model.family == Family::Exponential) {
        if (scale_K <= p)
            throw CertificationError(
                "make_log_transform: exponential tract inequality degenerates, need K > |lambda|");
        lt.tract_threshold = std::log(scale_K / p) / scale_K;
        lt.attraction_threshold =
            std::max(std::log(lt.tract_threshold), std::log(2.0 / scale_K));
    } else {
        lt.tract_threshold = std::asinh(scale_K / p) / scale_K;
        const double tanh_floor = std::tanh(scale_K * lt.tract_threshold);
        lt.attraction_threshold =
            std::max(std::log(lt.tract_threshold), std::log(2.0 / (scale_K * tanh_floor)));
    }
    return lt;
}

EvalResult eval_f(const EntireModel& model, const Cplx& z) {
    EvalResult r;
    if (model.family == Family::Exponential) {
        r.exponent_re = z.real();
        if (z.real() > kOverflowRe) {
            r.escaped_by_overflow = true;
            return r;
        }
        r.value = model.parameter * std::exp(z);
    } else {
        r.exponent_re = std::abs(z.real());
        if (r.exponent_re > kOverflowRe) {
            r.escaped_by_overflow = true;
            return r;
        }
        r.value = model.parameter * std::cosh(z);
    }
    return r;
}

EvalResult eval_f_rescaled(const LogTransform& lt, const Cplx& z) {
    EvalResult r = eval_f(lt.model, lt.scale_K * z);
    if (!r.escaped_by_overflow) r.value /= lt.scale_K;
    return r;
}

EvalResult eval_F_unchecked(const LogTransform& lt, const Cplx& w, int base) {
    EvalResult r;
    r.exponent_re = w.real();
    if (w.real() > kOverflowRe) {
        r.escaped_by_overflow = true;
        return r;
    }
    const Cplx c = branch_constant(lt);
    if (lt.model.family == Family::Exponential) {
        r.value = lt.scale_K * std::exp(w) + c;
        return r;
    }
    // cosh: u = +-K e^w has positive real part on the corresponding tract
    const Cplx u = (base == 0 ? 1.0 : -1.0) * lt.scale_K * std::exp(w);
    Cplx corr{};
    if (u.real() < 350.0) corr = log1p_c(std::exp(-2.0 * u));
    r.value = u + c + corr;
    return r;
}

Cplx eval_F_derivative(const LogTransform& lt, const Cplx& w, int base) {
    if (lt.model.family == Family::Exponential) return lt.scale_K * std::exp(w);
    const Cplx Kew = lt.scale_K * std::exp(w);
    const Cplx u = (base == 0 ? 1.0 : -1.0) * Kew;
    return (base == 0 ? 1.0 : -1.0) * Kew * std::tanh(u);
}

std::optional<TractLabel> tract_membership(const LogTransform& lt, const Cplx& w) {
    if (!geom::finite(w)) return std::nullopt;
    if (w.real() <= lt.attraction_threshold) return std::nullopt;
    const double log_t = std::log(lt.tract_threshold);
    int branch;
    double local;
    split_branch(w.imag(), branch, local);
    // base 0: Re(e^w) > t, i.e. e^{Re w} cos(local) > t, compared in logs
    if (std::abs(local) < kPi / 2) {
        if (w.real() + std::log(std::cos(local)) > log_t) return TractLabel{0, branch};
        return std::nullopt;
    }
    if (lt.model.family == Family::Cosh) {
        // base 1: Re(e^w) < -t around Im w = pi + 2 pi m
        int branch1;
        double local1;
        split_branch(w.imag() - kPi, branch1, local1);
        if (std::abs(local1) < kPi / 2 &&
            w.real() + std::log(std::cos(local1)) > log_t)
            return TractLabel{1, branch1};
    }
    return std::nullopt;
}

double spine_im(const LogTransform& lt, const TractLabel& label) {
    double im = kTwoPi * label.branch;
    if (lt.model.family == Family::Cosh && label.base == 1) im += kPi;
    return im;
}

namespace {

TractLabel nearest_label(const LogTransform& lt, const Cplx& w) {
    int branch;
    double local;
    split_branch(w.imag(), branch, local);
    if (lt.model.family == Family::Exponential) return TractLabel{0, branch};
    int branch1;
    double local1;
    split_branch(w.imag() - kPi, branch1, local1);
    return std::abs(local) <= std::abs(local1) ? TractLabel{0, branch}
                                               : TractLabel{1, branch1};
}

}  // namespace

EvalResult eval_F(const LogTransform& lt, const Cplx& w, const TractLabel& label) {
    const auto member = tract_membership(lt, w);
    if (!member || !(*member == label)) {
        throw DomainError("eval_F: point not in tract " + to_string(label) +
                          "; nearest tract is " + to_string(nearest_label(lt, w)));
    }
    return eval_F_unchecked(lt, w, label.base);
}

Cplx inverse_branch(const LogTransform& lt, const Cplx& zeta, const TractLabel& label) {
    if (zeta.real() <= 0.0)
        throw DomainError("inverse_branch: target outside right half-plane");
    const Cplx c = branch_constant(lt);
    const Cplx offset{0.0, kTwoPi * label.branch};
    if (lt.model.family == Family::Exponential) {
        return std::log((zeta - c) / lt.scale_K) + offset;
    }
    // cosh: solve u + log1p(exp(-2u)) = zeta - c by fixed point; the
    // correction is tiny whenever Re u is moderately positive.
    const Cplx rhs = zeta - c;
    Cplx u = rhs;
    double delta = 0.0;
    for (int it = 0; it < 100; ++it) {
        Cplx corr{};
        if (u.real() < 350.0) corr = log1p_c(std::exp(-2.0 * u));
        const Cplx next = rhs - corr;
        delta = std::abs(next - u);
        u = next;
        if (delta < 1e-13) break;
    }
    if (!(delta < 1e-10))
        throw NumericError("inverse_branch: correction solve did not converge", delta);
    if (label.base == 0) return std::log(u / lt.scale_K) + offset;
    return std::log(u / lt.scale_K) + Cplx{0.0, kPi} + offset;
}

ExpansionReport certify_expansion(const LogTransform& lt, int samples) {
    ExpansionReport rep;
    rep.samples = samples;
    const double log_t = std::log(lt.tract_threshold);
    if (lt.model.family == Family::Exponential) {
        rep.analytic_bound = lt.scale_K * std::exp(lt.attraction_threshold);
    } else {
        rep.analytic_bound = lt.scale_K * std::exp(lt.attraction_threshold) *
                             std::tanh(lt.scale_K * lt.tract_threshold);
    }
    rep.min_observed = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double x_lo = lt.attraction_threshold;
    for (int i = 0; i < samples; ++i) {
        const int base = (lt.model.family == Family::Cosh && (i & 1)) ? 1 : 0;
        // bias real parts toward the restriction wall
        const double x = x_lo + 1e-9 + 6.0 * unif(rng) * unif(rng);
        double range = kPi / 2;
        const double cos_needed = std::exp(std::min(0.0, log_t - x));
        if (cos_needed < 1.0) range = std::acos(cos_needed);
        // half the samples hug the tract boundary
        double local;
        if (i % 2 == 0) {
            local = range * (2.0 * unif(rng) - 1.0);
        } else {
            local = (unif(rng) < 0.5 ? -1.0 : 1.0) * range * (1.0 - 1e-3 * unif(rng));
        }
        const Cplx w{x, spine_im(lt, TractLabel{base, 0}) + local * 0.999999};
        if (!tract_membership(lt, w)) continue;
        const double d = std::abs(eval_F_derivative(lt, w, base));
        if (d < rep.min_observed) {
            rep.min_observed = d;
            rep.witness = w;
        }
    }
    rep.certified = rep.analytic_bound >= 2.0;
    return rep;
}

bool plane_tract_membership(const LogTransform& lt, const Cplx& z) {
    if (lt.model.family == Family::Exponential)
        return z.real() > lt.tract_threshold;
    return std::abs(z.real()) > lt.tract_threshold;
}

}  // namespace escaping::models
