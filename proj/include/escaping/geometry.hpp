#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace escaping::geom {

using Cplx = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Default absolute tolerance for geometric comparisons. One global knob;
// operations that need a different value take it as a parameter.
inline constexpr double kGeomTol = 1e-9;

bool finite(const Cplx& z);

struct Disk {
    Cplx center;
    double radius;  // > 0

    bool contains(const Cplx& z) const { return std::abs(z - center) < radius; }
};

// {Re z > threshold}
struct HalfPlane {
    double threshold = 0.0;

    bool contains(const Cplx& z) const { return z.real() > threshold; }
};

// Ordered point list approximating a curve; unbounded curves are truncated
// at truncation_re, which is part of the data so downstream claims can be
// stated "up to the truncation".
struct Polyline {
    std::vector<Cplx> points;
    double truncation_re = 0.0;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

// Hyperbolic distance in {Re z > h.threshold} (curvature -1), via the
// cross-ratio closed form. Throws DomainError for points outside the domain.
double hyperbolic_distance_halfplane(const Cplx& a, const Cplx& b, const HalfPlane& h);

// A conformal isomorphism from the right half-plane onto some domain,
// with a computable inverse.
struct ConformalMap {
    std::function<Cplx(Cplx)> forward;
    std::function<Cplx(Cplx)> inverse;  // may be empty; see make_newton_inverse
};

// Builds an inverse for `forward` by damped Newton iteration with a
// finite-difference derivative. Throws NumericError if it fails to converge.
std::function<Cplx(Cplx)> make_newton_inverse(std::function<Cplx(Cplx)> forward,
                                              Cplx initial_guess,
                                              double tol = 1e-12);

// Hyperbolic distance in the image domain of `map`, computed as half-plane
// distance of the preimages (conformal invariance).
double hyperbolic_distance_via_map(const Cplx& a, const Cplx& b, const ConformalMap& map,
                                   const HalfPlane& h = HalfPlane{0.0});

// Euclidean distance from a point to a segment [p, q].
double point_to_segment_distance(const Cplx& z, const Cplx& p, const Cplx& q);

// Euclidean distance from a point to the union of segments of c.
// A single-point polyline is treated as that point.
double point_to_polyline_distance(const Cplx& z, const Polyline& c);

// Segment index structure for repeated nearest-distance queries against the
// same polyline; prunes by real-part separation.
class PolylineIndex {
  public:
    explicit PolylineIndex(const Polyline& c);
    double distance(const Cplx& z) const;

  private:
    struct Seg {
        Cplx p, q;
        double re_lo, re_hi;
    };
    std::vector<Seg> segs_;  // sorted by re_lo
    std::vector<double> prefix_max_re_hi_;
};

// sup over points of a of distance to b (one-sided Hausdorff over vertices).
double directed_sup_distance(const Polyline& a, const Polyline& b);

// max of the two directed sups.
double hausdorff_distance(const Polyline& a, const Polyline& b);

}  // namespace escaping::geom
