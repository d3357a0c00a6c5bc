#pragma once

#include <vector>

#include "escaping/geometry.hpp"
#include "escaping/symbolic.hpp"

namespace escaping::hairs {

using geom::Cplx;
using geom::Disk;
using geom::Polyline;
using models::LogTransform;
using models::TractLabel;
using sym::ExternalAddress;
using sym::OrbitRecord;

// Mesh bound for adaptive refinement of pulled-back curves.
inline constexpr double kDefaultMesh = 0.1;
// Radius of the cut disks around the anchor orbit.
inline constexpr double kCutRadius = geom::kTwoPi;

// Finite-depth approximation of the nested pullback sets along an address.
// curves[j] approximates the unbounded escaping continuum attached to the
// j-th shifted address, cut at the disk of radius 2 pi around the j-th
// anchor point, truncated at its truncation_re.
struct HairApproximation {
    ExternalAddress address;
    int depth_K = 0;
    std::vector<Polyline> curves;            // index j = 0 .. horizon - depth_K
    std::vector<Cplx> anchor_orbit;          // z_j; entries past overflow are absent
    std::vector<bool> cut_active;            // per level j: did the disk cut engage
    double disk_radius = kCutRadius;
    double mesh = kDefaultMesh;
    int j0 = 0;                              // first anchor index used for 2 pi claims
    std::vector<double> depth_deltas;        // Hausdorff delta of curves[0] per depth
    std::vector<Polyline> curve0_history;    // curves[0] after each depth (1-based)
};

// Discretized tract-spine segment from re_from to re_to with n_points
// points, shifted to the tract named by label. Throws DomainError when the
// segment exits the tract.
Polyline seed_tail_curve(const LogTransform& lt, const TractLabel& label, double re_from,
                         double re_to, int n_points);

// One pullback: maps target through the inverse branch for `label`,
// refines where consecutive preimages are farther apart than `mesh`, and
// removes the maximal initial sub-polyline inside cut_disk, keeping the
// unbounded (maximal-Re) end; the exact circle crossing is inserted.
// Throws DegenerateCutError when nothing survives the cut.
Polyline pullback_step(const LogTransform& lt, const Polyline& target,
                       const TractLabel& label, const Disk& cut_disk,
                       double mesh = kDefaultMesh);

// Iterative pullback construction: seeds tail curves at every level,
// then applies depth_K pullback rounds, cutting at the anchor disks and
// re-extending each pulled curve along the tract spine to the working
// truncation (the finite-precision proxy for pulling back an unbounded
// set; see README).
HairApproximation build_hair(const LogTransform& lt, const ExternalAddress& address,
                             const OrbitRecord& anchor, int depth_K,
                             double truncation_re = 2000.0, double mesh = kDefaultMesh);

// Variant that seeds every level with the spine shifted by `seed_offset`
// (used to probe merge behaviour from distinct spines).
HairApproximation build_hair_offset(const LogTransform& lt, const ExternalAddress& address,
                                    const OrbitRecord& anchor, int depth_K, Cplx seed_offset,
                                    double truncation_re = 2000.0,
                                    double mesh = kDefaultMesh);

struct MergeReport {
    double sup_distance = 0.0;            // at full depth, between the curves[0]
    std::vector<double> per_depth_sup;    // from the curve0 histories
    bool merged = false;                  // sup < 2^(1-depth) pi
    bool disjoint_type = false;           // closure of tracts inside H with margin
    double tract_re_infimum = 0.0;
};

// Compares two same-address hairs; throws DomainError on address mismatch.
MergeReport merge_test(const LogTransform& lt, const HairApproximation& a,
                       const HairApproximation& b);

// Numerical disjoint-type certificate: infimum of Re over the tract
// boundary (= the restriction wall for the shipped families).
double tract_boundary_re_infimum(const LogTransform& lt);

struct EscapeAudit {
    int samples = 0;
    int escaping = 0;
    double fraction = 0.0;
    double min_growth_margin = 0.0;  // min over audited orbits of re growth factor
};

// Samples points along curves[0] and tracks each with track_orbit.
EscapeAudit escape_audit(const LogTransform& lt, const HairApproximation& hair,
                         int sample_count, int horizon);

// Structural checks used by tests and the acceptance suite.
struct HairInvariantReport {
    double worst_disk_violation = 0.0;   // max penetration into any active D_j
    double worst_boundary_gap = 1e300;   // min over active j of dist(curve, dD_j)
    double worst_forward_residual = 0.0; // forward-inclusion residual (within truncation)
    int forward_points_checked = 0;
};

HairInvariantReport check_hair_invariants(const LogTransform& lt,
                                          const HairApproximation& hair);

}  // namespace escaping::hairs
