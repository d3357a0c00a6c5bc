#pragma once

#include <vector>

#include "escaping/models.hpp"

namespace escaping::norm {

using geom::Cplx;
using models::EntireModel;
using models::LogTransform;

// Forward orbits of the singular values, with the evidence gathered about
// boundedness of the postsingular set.
struct PostsingularReport {
    struct Orbit {
        Cplx singular_value{};
        std::vector<Cplx> points;  // forward orbit, including the seed
        bool converged = false;
        bool unbounded_evidence = false;
    };
    std::vector<Orbit> orbits;
    double bound_radius = 0.0;  // sup of moduli over all stored points

    bool all_converged() const;
};

// Iterates each singular value up to `horizon` steps. An orbit is marked
// converged once successive iterates differ by < settle_tol for 20
// consecutive steps; it is marked unbounded_evidence (and iteration stops)
// once its modulus exceeds 1e100.
PostsingularReport postsingular_orbit(const EntireModel& model, int horizon,
                                      double settle_tol);

// Resolves "sufficiently large K": doubling search from max(1, 2 bound_radius)
// until the rescaled postsingular set lies in the disk of radius 1/2 and the
// expansion certificate passes. Throws DomainError when the report is not
// fully converged, CertificationError if the search exceeds 2^60.
LogTransform choose_rescaling(const EntireModel& model, const PostsingularReport& report);

// True iff every orbit point of the report, rescaled by 1/K, has modulus
// at most 1/2.
bool rescaled_postsingular_inside_half_disk(const LogTransform& lt,
                                            const PostsingularReport& report);

// Samples tract points w and checks |f_K(exp w)| > 1, i.e. that tracts map
// into W = {|z| > 1} in plane coordinates. True iff no counterexample.
bool verify_W_preimage(const LogTransform& lt, int samples);

}  // namespace escaping::norm
