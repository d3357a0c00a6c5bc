#pragma once

#include <cstdint>
#include <vector>

#include "escaping/geometry.hpp"

namespace escaping::lemmas {

using geom::Cplx;
using geom::Polyline;

// A synthetic tract given by a closed Jordan boundary approximation, with
// unbounded ends truncated at a large real part.
struct SyntheticTract {
    Polyline boundary;  // closed polygon (first point repeated last)
    bool period_disjoint = false;

    double max_re() const;
};

// Checks boundary simplicity and disjointness from the 2 pi i translate by
// segment-pair tests; fills period_disjoint.
bool certify_translate_disjoint(SyntheticTract& t);

// Even-odd point-in-polygon test against the boundary.
bool inside_tract(const SyntheticTract& t, const Cplx& z);

struct SeparationVerdict {
    bool in_unbounded_re_component = false;  // (a): z in unbounded comp of {Re > R} in T
    bool tilde_contained = true;             // (b): unbounded comp of T \ segment inside (a)'s
    bool resolved = true;                    // grid resolved the tract's neck
    double grid_step = 0.0;
};

// Grid flood-fill check of the tract-separation statement: if z lies in the
// unbounded component U of {Re > R} in T, then the unbounded component of
// T minus the vertical segment [z - 2 pi i, z + 2 pi i] is contained in U.
// "Unbounded" at finite truncation means touching the max-Re boundary.
SeparationVerdict separation_check(const SyntheticTract& t, const Cplx& z, double R,
                                   double grid_step = 0.0);

struct ProximityVerdict {
    double sup0 = 0.0;  // sup over c0 of dist to c1
    double sup1 = 0.0;
    bool within_2pi = false;  // min(sup0, sup1) <= 2 pi + tolerance
};

// The two-curve 2 pi proximity property inside a tract.
ProximityVerdict proximity_check(const SyntheticTract& t, const Polyline& c0,
                                 const Polyline& c1, double tolerance = 1e-6);

// A randomized piecewise-horizontal serpentine tract: corridors of height
// h < 2 pi with 1..4 U-turns, all inside a band of total height < 2 pi so
// translate-disjointness holds by construction.
struct Serpentine {
    SyntheticTract tract;
    std::vector<Cplx> corridor_spine;  // polyline through the corridors
    double corridor_height = 0.0;
    int u_turns = 0;
    std::uint64_t seed = 0;
};

Serpentine make_serpentine(std::uint64_t seed);

// A deliberately non-tract control: a vertical extent above 2 pi, which
// overlaps its translate; used to confirm the campaign can detect
// violations.
SyntheticTract make_tall_control(double height);

struct CampaignTrial {
    std::uint64_t seed = 0;
    bool separation_ok = true;
    bool proximity_ok = true;
    bool resolved = true;
};

struct CampaignReport {
    std::vector<CampaignTrial> trials;
    int separation_counterexamples = 0;
    int proximity_counterexamples = 0;
    int unresolved = 0;
    bool control_violated = false;  // the designed non-tract produced a violation
};

// Runs `trials` randomized serpentine trials (10 sample points each for the
// separation predicate, one curve pair for proximity) plus the control.
CampaignReport run_campaign(int trials, std::uint64_t seed);

}  // namespace escaping::lemmas
