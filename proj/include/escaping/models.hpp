#pragma once

#include <optional>
#include <string>
#include <vector>

#include "escaping/geometry.hpp"

namespace escaping::models {

using geom::Cplx;

enum class Family { Exponential, Cosh };

// An explicit entire function with bounded singular set:
//   Exponential: f(z) = lambda * e^z,   sing(f^-1) = {0}
//   Cosh:        f(z) = a * cosh(z),    sing(f^-1) = {a, -a}
struct EntireModel {
    Family family = Family::Exponential;
    Cplx parameter{0.25, 0.0};

    std::vector<Cplx> singular_values() const;
};

// One tract of the logarithmic transform: a family-specific base index
// plus the 2*pi*i translate it lives in.
//   Exponential: base 0 only, branch m covers Im w in (-pi/2, pi/2) + 2 pi m.
//   Cosh: base 0 (right end) as above; base 1 (left end) covers
//         Im w in (pi/2, 3 pi/2) + 2 pi m.
struct TractLabel {
    int base = 0;
    int branch = 0;

    bool operator==(const TractLabel&) const = default;
};

std::string to_string(const TractLabel& t);

// Result of evaluating a map where the exponent may exceed double range.
// When escaped_by_overflow is set, `value` is meaningless and exponent_re
// reports the real part of the exponent that overflowed.
struct EvalResult {
    Cplx value{};
    bool escaped_by_overflow = false;
    double exponent_re = 0.0;
};

// Real part of an exponent beyond which we refuse to exponentiate.
inline constexpr double kOverflowRe = 700.0;

// Logarithmic transform of the rescaled map f_K(z) = f(K z)/K, acting on
// log coordinates: exp(F(w)) = f_K(exp(w)) on the tract domain.
//
// Tract geometry is an explicit inequality:
//   Exponential: Re(e^w) > tract_threshold, with tract_threshold = ln(K/|l|)/K
//   Cosh base 0: Re(e^w) >  tract_threshold = asinh(K/|a|)/K
//   Cosh base 1: Re(e^w) < -tract_threshold
// intersected with Re w > attraction_threshold, the restriction on which
// the analytic bound |F'| >= 2 is certified.
struct LogTransform {
    EntireModel model;
    double scale_K = 1.0;
    double tract_threshold = 0.0;
    double attraction_threshold = 0.0;  // R0

    int num_bases() const { return model.family == Family::Exponential ? 1 : 2; }
};

// Builds the transform with canonical thresholds for the given scale.
// Throws CertificationError if the tract inequality degenerates
// (exponential family requires K > |lambda|).
LogTransform make_log_transform(const EntireModel& model, double scale_K);

// f(z) with overflow saturation.
EvalResult eval_f(const EntireModel& model, const Cplx& z);

// f_K(z) = f(K z)/K with overflow saturation.
EvalResult eval_f_rescaled(const LogTransform& lt, const Cplx& z);

// F(w) for w in the tract named by `label` (the value is independent of
// label.branch; the label fixes which tract w is expected to lie in).
// Throws DomainError when w is outside that tract, naming the nearest one.
EvalResult eval_F(const LogTransform& lt, const Cplx& w, const TractLabel& label);

// As eval_F but without the membership check; used internally and by
// callers that have already established membership.
EvalResult eval_F_unchecked(const LogTransform& lt, const Cplx& w, int base);

// Analytic derivative F'(w).
Cplx eval_F_derivative(const LogTransform& lt, const Cplx& w, int base);

// The preimage of zeta under F in the tract named by `label`.
// Requires Re zeta > 0; throws DomainError otherwise, NumericError if the
// correction solve (cosh family) fails to converge.
Cplx inverse_branch(const LogTransform& lt, const Cplx& zeta, const TractLabel& label);

// Label of the tract containing w, if any.
std::optional<TractLabel> tract_membership(const LogTransform& lt, const Cplx& w);

// The tract's spine: the horizontal line along which the family's tract
// stretches to +infinity (exponential: Im w = 2 pi m; cosh base 1:
// Im w = pi + 2 pi m).
double spine_im(const LogTransform& lt, const TractLabel& label);

struct ExpansionReport {
    bool certified = false;
    double analytic_bound = 0.0;   // lower bound for |F'| on the restricted tracts
    double min_observed = 0.0;     // over the sample set
    Cplx witness{};                // point achieving min_observed
    int samples = 0;
};

// Samples tract points (boundary-biased) and reports the minimum |F'|
// observed together with the closed-form lower bound on the restriction.
// certified iff the analytic bound is >= 2.
ExpansionReport certify_expansion(const LogTransform& lt, int samples);

// Plane-coordinate tract test: is z in a tract of the rescaled map,
// i.e. |f_K(z)| > 1 by the family's defining inequality.
bool plane_tract_membership(const LogTransform& lt, const Cplx& z);

}  // namespace escaping::models
