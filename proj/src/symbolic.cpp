#include "escaping/symbolic.hpp"

#include <cmath>
#include <limits>

#include "escaping/errors.hpp"

namespace escaping::sym {

namespace {
using geom::kTwoPi;
using models::EvalResult;
using models::Family;
constexpr double kPi = 3.14159265358979323846264338327950288;
}  // namespace

ExternalAddress shift(const ExternalAddress& a) {
    ExternalAddress out;
    if (!a.labels.empty())
        out.labels.assign(a.labels.begin() + 1, a.labels.end());
    out.horizon = static_cast<int>(out.labels.size());
    return out;
}

std::optional<int> detect_period(const ExternalAddress& a) {
    const int n = static_cast<int>(a.labels.size());
    for (int p = 1; p <= n / 2; ++p) {
        bool ok = true;
        for (int i = 0; i + p < n && ok; ++i) ok = a.labels[i + p] == a.labels[i];
        if (ok) return p;
    }
    return std::nullopt;
}

OrbitRecord track_orbit(const LogTransform& lt, const Cplx& seed, int horizon,
                        double escape_re) {
    if (horizon < 1) throw DomainError("track_orbit: horizon must be >= 1");
    OrbitRecord rec;
    rec.seed = seed;
    rec.horizon = horizon;
    Cplx w = seed;
    for (int n = 0; n <= horizon; ++n) {
        OrbitStep step;
        step.point = w;
        step.re_part = w.real();
        step.tract = models::tract_membership(lt, w);
        rec.steps.push_back(step);
        if (!step.tract) {
            rec.verdict = Verdict::Bounded;
            return rec;
        }
        if (n == horizon) break;
        const EvalResult r = models::eval_F_unchecked(lt, w, step.tract->base);
        if (r.escaped_by_overflow) {
            rec.steps.back().overflowed = true;
            rec.escaped_by_overflow = true;
            rec.verdict = Verdict::Escaping;
            return rec;
        }
        w = r.value;
    }
    // Monotone growth past escape_re, with at least two observed increases
    // beyond the threshold, is the escape criterion.
    const auto& s = rec.steps;
    for (std::size_t i = 0; i + 2 < s.size(); ++i) {
        if (s[i].re_part <= escape_re) continue;
        bool monotone = true;
        for (std::size_t j = i; j + 1 < s.size() && monotone; ++j)
            monotone = s[j + 1].re_part > s[j].re_part;
        rec.verdict = monotone ? Verdict::Escaping : Verdict::Inconclusive;
        return rec;
    }
    rec.verdict = Verdict::Inconclusive;
    return rec;
}

ExternalAddress forward_address(const OrbitRecord& record) {
    if (record.verdict != Verdict::Escaping)
        throw DomainError("forward_address: record is not Escaping");
    ExternalAddress addr;
    const std::size_t count =
        std::min<std::size_t>(record.steps.size(), static_cast<std::size_t>(record.horizon));
    for (std::size_t i = 0; i < count; ++i) {
        if (!record.steps[i].tract)
            throw DomainError(
                "forward_address: step without tract label; use backward_extend_address");
        addr.labels.push_back(*record.steps[i].tract);
    }
    addr.horizon = static_cast<int>(addr.labels.size());
    return addr;
}

namespace {

// Preimage of tau under f_K nearest to the previous preimage q.
Cplx nearest_preimage(const LogTransform& lt, const Cplx& tau, const Cplx& q) {
    const double K = lt.scale_K;
    if (lt.model.family == Family::Exponential) {
        const Cplx principal = std::log(K * tau / lt.model.parameter) / K;
        const double step = kTwoPi / K;
        const double n = std::round((q.imag() - principal.imag()) / step);
        return principal + Cplx{0.0, n * step};
    }
    const Cplx y = K * tau / lt.model.parameter;
    const Cplx p = std::acosh(y);  // K z = +-p + 2 pi i n
    const double step = kTwoPi / K;
    Cplx best{};
    double best_d = std::numeric_limits<double>::infinity();
    for (const double sgn : {1.0, -1.0}) {
        const Cplx cand0 = sgn * p / K;
        const double n = std::round((q.imag() - cand0.imag()) / step);
        const Cplx cand = cand0 + Cplx{0.0, n * step};
        const double d = std::abs(cand - q);
        if (d < best_d) {
            best_d = d;
            best = cand;
        }
    }
    return best;
}

constexpr int kSubsteps = 32;

// Pulls a plane polyline back one step through f_K, anchored so that the
// first path point tau0 (which must equal f_K(anchor)) pulls back to anchor.
std::vector<Cplx> pull_back_path(const LogTransform& lt, const std::vector<Cplx>& path,
                                 const Cplx& anchor) {
    std::vector<Cplx> out;
    out.reserve(path.size());
    Cplx q = anchor;
    out.push_back(q);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        for (int s = 1; s <= kSubsteps; ++s) {
            const double t = static_cast<double>(s) / kSubsteps;
            const Cplx tau = path[i] + t * (path[i + 1] - path[i]);
            const Cplx next = nearest_preimage(lt, tau, q);
            if (std::abs(next - q) > kPi / lt.scale_K)
                throw NumericError(
                    "backward_extend_address: branch continuation jumped; orbit too close to "
                    "the singular value path",
                    std::abs(next - q));
            q = next;
            if (s == kSubsteps) out.push_back(q);
        }
    }
    return out;
}

}  // namespace

ExternalAddress backward_extend_address(const LogTransform& lt,
                                        const std::vector<Cplx>& plane_orbit, int k0) {
    const int n = static_cast<int>(plane_orbit.size());
    if (n < 2 || k0 < 0 || k0 >= n)
        throw DomainError("backward_extend_address: bad orbit or k0");
    for (int j = k0; j < n; ++j)
        if (!models::plane_tract_membership(lt, plane_orbit[j]))
            throw DomainError("backward_extend_address: orbit index " + std::to_string(j) +
                              " not in a plane tract");

    ExternalAddress addr;
    addr.labels.resize(n);

    Cplx chain_lift;  // lifted far-tail point at the current level
    if (k0 > 0) {
        // Far ray in the plane tract at level k0, reached from the anchor.
        const Cplx zk = plane_orbit[k0];
        const double side =
            (lt.model.family == Family::Cosh && zk.real() < 0.0) ? -1.0 : 1.0;
        const double far = std::max(10.0, 2.0 * std::abs(zk)) * side;
        // the tail must reach far enough that its level-0 pullback sits
        // safely inside the tract, not on its threshold; geometric spacing
        // keeps the continuation substeps small in log scale
        std::vector<Cplx> path{zk, Cplx{far, zk.imag()}, Cplx{far, 0.0}};
        for (double r = 10.0 * far; std::abs(r) <= 1e8 * std::abs(far); r *= 10.0)
            path.push_back(Cplx{r, 0.0});
        std::vector<std::vector<Cplx>> levels(k0 + 1);
        levels[k0] = path;
        for (int m = k0 - 1; m >= 0; --m)
            levels[m] = pull_back_path(lt, levels[m + 1], plane_orbit[m]);

        // Lift the level-0 curve by branch continuation from the principal
        // log, then push the lifted curve forward with F. The tract label of
        // each level is read off the lifted tail's imaginary part: the tail
        // itself may still sit behind the restriction wall (reaching it
        // requires a doubly exponentially long ray), but the branch it heads
        // into is already determined.
        std::vector<Cplx> lift;
        lift.reserve(levels[0].size());
        lift.push_back(std::log(levels[0][0]));
        for (std::size_t i = 1; i < levels[0].size(); ++i) {
            const Cplx principal = std::log(levels[0][i]);
            const double nb = std::round((lift.back().imag() - principal.imag()) / kTwoPi);
            lift.push_back(principal + Cplx{0.0, nb * kTwoPi});
        }
        const auto label_of_tail = [&](const Cplx& tail, const Cplx& plane_tail) {
            TractLabel l;
            if (lt.model.family == Family::Cosh && plane_tail.real() < 0.0) l.base = 1;
            const double offset = l.base == 1 ? kPi : 0.0;
            l.branch = static_cast<int>(std::lround((tail.imag() - offset) / kTwoPi));
            return l;
        };
        for (int j = 0; j < k0; ++j) {
            addr.labels[j] = label_of_tail(lift.back(), levels[j].back());
            for (std::size_t i = 0; i < lift.size(); ++i) {
                const int base =
                    (lt.model.family == Family::Cosh && levels[j][i].real() < 0.0) ? 1 : 0;
                const auto r = models::eval_F_unchecked(lt, lift[i], base);
                if (r.escaped_by_overflow)
                    throw DomainError("backward_extend_address: far-tail lift overflowed");
                lift[i] = r.value;
            }
        }
        chain_lift = lift.back();
    }

    // Forward part: lift the orbit at k0 (continuing the chain when there
    // was a backward part) and read labels off the iterated lift.
    Cplx zeta = (k0 > 0) ? chain_lift : std::log(plane_orbit[k0]);
    int filled = k0;
    for (int j = k0; j < n; ++j) {
        const auto label = models::tract_membership(lt, zeta);
        if (!label) break;
        addr.labels[j] = *label;
        filled = j + 1;
        if (j + 1 < n) {
            const auto r = models::eval_F_unchecked(lt, zeta, label->base);
            if (r.escaped_by_overflow) break;
            zeta = r.value;
        }
    }
    addr.labels.resize(filled);
    addr.horizon = filled;
    return addr;
}

bool in_unbounded_tract_component(const LogTransform& lt, const Cplx& w,
                                  bool* used_heuristic) {
    if (used_heuristic) *used_heuristic = false;
    const auto label = models::tract_membership(lt, w);
    if (!label || w.real() <= 0.0) return false;
    if (lt.attraction_threshold >= 0.0) return true;  // tract already inside H
    // Tract cross-sections at fixed Re are intervals containing the spine,
    // so the fixed-Re segment to the spine plus the spine ray connect w to
    // the unbounded end; sample the segment to confirm.
    if (used_heuristic) *used_heuristic = true;
    const double target = models::spine_im(lt, *label);
    for (int s = 1; s <= 64; ++s) {
        const double t = static_cast<double>(s) / 64;
        const Cplx p{w.real(), w.imag() + t * (target - w.imag())};
        const auto m = models::tract_membership(lt, p);
        if (!m || !(*m == *label)) return false;
    }
    return true;
}

}  // namespace escaping::sym
