#pragma once

#include <optional>
#include <vector>

#include "escaping/models.hpp"

namespace escaping::sym {

using geom::Cplx;
using models::LogTransform;
using models::TractLabel;

enum class Verdict { Escaping, Bounded, Inconclusive };

struct OrbitStep {
    Cplx point{};
    std::optional<TractLabel> tract;
    double re_part = 0.0;
    bool overflowed = false;  // the step after this one was cut off by overflow
};

// Forward orbit of a seed under F in log coordinates.
struct OrbitRecord {
    Cplx seed{};
    std::vector<OrbitStep> steps;  // steps[n] = F^n(seed), n = 0..horizon
    Verdict verdict = Verdict::Inconclusive;
    int horizon = 0;
    bool escaped_by_overflow = false;
};

// Finite-horizon truncation of the external address T0 T1 T2 ...
struct ExternalAddress {
    std::vector<TractLabel> labels;
    int horizon = 0;

    bool operator==(const ExternalAddress&) const = default;
};

// Shift sigma: drops the first entry.
ExternalAddress shift(const ExternalAddress& a);

// Smallest period p with labels[i + p] == labels[i] for all valid i,
// or nullopt if no strict period fits the horizon.
std::optional<int> detect_period(const ExternalAddress& a);

inline constexpr double kDefaultEscapeRe = 50.0;

// Iterates F while the orbit stays in tracts. Verdicts:
//   Escaping: re_part exceeds escape_re at some index and increases strictly
//             from there on (or the orbit overflowed double range);
//   Bounded: a point left every tract;
//   Inconclusive: horizon exhausted without either.
OrbitRecord track_orbit(const LogTransform& lt, const Cplx& seed, int horizon,
                        double escape_re = kDefaultEscapeRe);

// Per-step tract labels of an escaping record. Throws DomainError if the
// record is not Escaping or some step is missing a label (the caller should
// use backward_extend_address for plane orbits entering tracts late).
ExternalAddress forward_address(const OrbitRecord& record);

// External address of a plane-coordinate escaping orbit whose first k0
// entries lie outside the tracts: labels for j < k0 are produced by pulling
// a far ray back along the orbit through the explicit inverse branches of
// f_K and reading off which tract absorbs the lifted far tail. Labels for
// j >= k0 come from the lifted forward orbit.
ExternalAddress backward_extend_address(const LogTransform& lt,
                                        const std::vector<Cplx>& plane_orbit, int k0);

// Whether w lies in the unbounded component of (tract of w) intersected
// with the right half-plane. Tested by the tract inequality plus a spine
// ray connection; `used_heuristic` is set when the ray connection was needed.
bool in_unbounded_tract_component(const LogTransform& lt, const Cplx& w,
                                  bool* used_heuristic = nullptr);

}  // namespace escaping::sym
