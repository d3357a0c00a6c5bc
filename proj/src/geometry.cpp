#include "escaping/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "escaping/errors.hpp"

namespace escaping::geom {

bool finite(const Cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

double hyperbolic_distance_halfplane(const Cplx& a, const Cplx& b, const HalfPlane& h) {
    const double xa = a.real() - h.threshold;
    const double xb = b.real() - h.threshold;
    if (xa <= 0.0 || xb <= 0.0)
        throw DomainError("hyperbolic_distance_halfplane: point outside half-plane");
    const double d2 = std::norm(a - b);
    // acosh(1 + |a-b|^2 / (2 xa xb)), the cross-ratio formula transported
    // from the upper half-plane.
    return std::acosh(1.0 + d2 / (2.0 * xa * xb));
}

std::function<Cplx(Cplx)> make_newton_inverse(std::function<Cplx(Cplx)> forward,
                                              Cplx initial_guess, double tol) {
    return [forward, initial_guess, tol](Cplx target) -> Cplx {
        Cplx z = initial_guess;
        double res = std::abs(forward(z) - target);
        for (int it = 0; it < 200; ++it) {
            const Cplx fz = forward(z);
            res = std::abs(fz - target);
            if (res < tol) return z;
            const double hstep = std::max(1e-7, 1e-7 * std::abs(z));
            const Cplx d = (forward(z + hstep) - forward(z - hstep)) / (2.0 * hstep);
            if (std::abs(d) == 0.0) break;
            Cplx step = (fz - target) / d;
            // damp long steps
            if (std::abs(step) > 1.0) step /= std::abs(step);
            z -= step;
        }
        throw NumericError("make_newton_inverse: no convergence", res);
    };
}

double hyperbolic_distance_via_map(const Cplx& a, const Cplx& b, const ConformalMap& map,
                                   const HalfPlane& h) {
    if (!map.inverse) throw DomainError("hyperbolic_distance_via_map: map has no inverse");
    if (a == b) return 0.0;
    const Cplx pa = map.inverse(a);
    const Cplx pb = map.inverse(b);
    return hyperbolic_distance_halfplane(pa, pb, h);
}

double point_to_segment_distance(const Cplx& z, const Cplx& p, const Cplx& q) {
    const Cplx d = q - p;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(z - p);
    double t = ((z.real() - p.real()) * d.real() + (z.imag() - p.imag()) * d.imag()) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(z - (p + t * d));
}

double point_to_polyline_distance(const Cplx& z, const Polyline& c) {
    if (c.empty()) throw DomainError("point_to_polyline_distance: empty polyline");
    if (c.size() == 1) return std::abs(z - c.points[0]);
    double best = std::abs(z - c.points[0]);
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
        best = std::min(best, point_to_segment_distance(z, c.points[i], c.points[i + 1]));
    return best;
}

PolylineIndex::PolylineIndex(const Polyline& c) {
    if (c.empty()) throw DomainError("PolylineIndex: empty polyline");
    if (c.size() == 1) {
        segs_.push_back({c.points[0], c.points[0], c.points[0].real(), c.points[0].real()});
    } else {
        segs_.reserve(c.size() - 1);
        for (std::size_t i = 0; i + 1 < c.size(); ++i) {
            const Cplx& p = c.points[i];
            const Cplx& q = c.points[i + 1];
            segs_.push_back({p, q, std::min(p.real(), q.real()), std::max(p.real(), q.real())});
        }
    }
    std::sort(segs_.begin(), segs_.end(),
              [](const Seg& a, const Seg& b) { return a.re_lo < b.re_lo; });
    prefix_max_re_hi_.resize(segs_.size());
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < segs_.size(); ++i) {
        m = std::max(m, segs_[i].re_hi);
        prefix_max_re_hi_[i] = m;
    }
}

double PolylineIndex::distance(const Cplx& z) const {
    // Start from the segment whose re-range is nearest to Re z and expand
    // outward; stop once re-separation alone exceeds the best distance.
    const double x = z.real();
    auto cmp = [](const Seg& s, double v) { return s.re_lo < v; };
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(segs_.size());
    std::ptrdiff_t mid = std::lower_bound(segs_.begin(), segs_.end(), x, cmp) - segs_.begin();
    double best = std::numeric_limits<double>::infinity();
    std::ptrdiff_t lo = mid - 1, hi = mid;
    while (lo >= 0 || hi < n) {
        if (hi < n) {
            const Seg& s = segs_[hi];
            if (s.re_lo - x > best) {
                hi = n;
            } else {
                best = std::min(best, point_to_segment_distance(z, s.p, s.q));
                ++hi;
            }
        }
        if (lo >= 0) {
            if (x - prefix_max_re_hi_[lo] > best) {
                lo = -1;
            } else {
                const Seg& s = segs_[lo];
                best = std::min(best, point_to_segment_distance(z, s.p, s.q));
                --lo;
            }
        }
    }
    return best;
}

double directed_sup_distance(const Polyline& a, const Polyline& b) {
    PolylineIndex idx(b);
    double sup = 0.0;
    for (const Cplx& p : a.points) sup = std::max(sup, idx.distance(p));
    return sup;
}

double hausdorff_distance(const Polyline& a, const Polyline& b) {
    return std::max(directed_sup_distance(a, b), directed_sup_distance(b, a));
}

}  // namespace escaping::geom
