#include "escaping/hairs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "escaping/errors.hpp"

namespace escaping::hairs {

namespace {

using geom::kTwoPi;

Cplx spine_point(const LogTransform& lt, const TractLabel& label, double x) {
    return Cplx{x, models::spine_im(lt, label)};
}

// Inserts preimages of target midpoints until consecutive pulled points are
// within `mesh`, then thins runs tighter than mesh/2.
void refine_segment(const LogTransform& lt, const TractLabel& label, const Cplx& t0,
                    const Cplx& t1, const Cplx& w0, const Cplx& w1, double mesh, int depth,
                    std::vector<Cplx>& out) {
    if (std::abs(w1 - w0) <= mesh || depth >= 24) {
        out.push_back(w1);
        return;
    }
    const Cplx tm = 0.5 * (t0 + t1);
    const Cplx wm = models::inverse_branch(lt, tm, label);
    refine_segment(lt, label, t0, tm, w0, wm, mesh, depth + 1, out);
    refine_segment(lt, label, tm, t1, wm, w1, mesh, depth + 1, out);
}

Polyline pullback_only(const LogTransform& lt, const Polyline& target,
                       const TractLabel& label, double mesh) {
    if (target.size() < 2) throw DomainError("pullback_step: target needs >= 2 points");
    std::vector<Cplx> out;
    out.reserve(target.size());
    Cplx prev_t = target.points.front();
    Cplx prev_w = models::inverse_branch(lt, prev_t, label);
    out.push_back(prev_w);
    for (std::size_t i = 1; i < target.size(); ++i) {
        const Cplx t = target.points[i];
        const Cplx w = models::inverse_branch(lt, t, label);
        refine_segment(lt, label, prev_t, t, prev_w, w, mesh, 0, out);
        prev_t = t;
        prev_w = w;
    }
    // thin: pullback contracts, so spacing collapses quickly
    std::vector<Cplx> thin;
    thin.reserve(out.size());
    thin.push_back(out.front());
    for (std::size_t i = 1; i + 1 < out.size(); ++i)
        if (std::abs(out[i] - thin.back()) >= 0.5 * mesh) thin.push_back(out[i]);
    if (out.size() > 1) thin.push_back(out.back());
    Polyline res;
    res.points = std::move(thin);
    res.truncation_re = res.points.back().real();
    return res;
}

// Appends canonical spine samples from the curve's far end out to trunc_re.
void extend_along_spine(const LogTransform& lt, const TractLabel& label, Polyline& curve,
                        double trunc_re, double mesh) {
    double x = curve.points.back().real();
    if (x >= trunc_re) {
        curve.truncation_re = trunc_re;
        return;
    }
    const double step = std::max(mesh * 0.9, (trunc_re - x) / 200000.0);
    for (x += step; x < trunc_re; x += step)
        curve.points.push_back(spine_point(lt, label, x));
    curve.points.push_back(spine_point(lt, label, trunc_re));
    curve.truncation_re = trunc_re;
}

struct CutResult {
    Polyline curve;
    bool active = false;
};

// Keeps the sub-polyline containing the maximal-Re endpoint, cutting at the
// disk boundary with the exact circle crossing inserted.
CutResult cut_at_disk(const Polyline& in, const Disk& disk) {
    const auto inside = [&](const Cplx& p) { return std::abs(p - disk.center) < disk.radius; };
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(in.size());
    std::ptrdiff_t last_inside = -1;
    for (std::ptrdiff_t i = n - 1; i >= 0; --i) {
        if (inside(in.points[i])) {
            last_inside = i;
            break;
        }
    }
    if (last_inside < 0) return {in, false};
    if (last_inside == n - 1)
        throw DegenerateCutError("pullback_step: unbounded end of curve lies inside the cut disk");
    CutResult res;
    res.active = true;
    const Cplx p = in.points[last_inside];
    const Cplx q = in.points[last_inside + 1];
    // |p + t (q - p) - c| = r, smallest t in [0,1] with the endpoint outside
    const Cplx d = q - p;
    const Cplx f = p - disk.center;
    const double A = std::norm(d);
    const double B = 2.0 * (f.real() * d.real() + f.imag() * d.imag());
    const double C = std::norm(f) - disk.radius * disk.radius;
    double t = 1.0;
    const double disc = B * B - 4.0 * A * C;
    if (A > 0.0 && disc >= 0.0) {
        const double root = (-B + std::sqrt(disc)) / (2.0 * A);
        if (root >= 0.0 && root <= 1.0) t = root;
    }
    res.curve.points.push_back(p + t * d);
    res.curve.points.insert(res.curve.points.end(), in.points.begin() + last_inside + 1,
                            in.points.end());
    res.curve.truncation_re = in.truncation_re;
    return res;
}

TractLabel label_at(const ExternalAddress& addr, const std::optional<int>& period, int j) {
    const int n = static_cast<int>(addr.labels.size());
    if (j < n) return addr.labels[j];
    if (!period)
        throw DomainError("build_hair: address too short and not periodic");
    int i = j;
    while (i >= n) i -= *period;
    return addr.labels[i];
}

}  // namespace

Polyline seed_tail_curve(const LogTransform& lt, const TractLabel& label, double re_from,
                         double re_to, int n_points) {
    if (!(re_from < re_to)) throw DomainError("seed_tail_curve: need re_from < re_to");
    if (n_points < 2) throw DomainError("seed_tail_curve: need >= 2 points");
    Polyline c;
    c.truncation_re = re_to;
    c.points.reserve(n_points);
    for (int i = 0; i < n_points; ++i) {
        const double x = re_from + (re_to - re_from) * i / (n_points - 1);
        c.points.push_back(spine_point(lt, label, x));
    }
    for (const Cplx& p : {c.points.front(), c.points.back()}) {
        const auto m = models::tract_membership(lt, p);
        if (!m || !(*m == label))
            throw DomainError("seed_tail_curve: segment exits tract " + models::to_string(label));
    }
    return c;
}

Polyline pullback_step(const LogTransform& lt, const Polyline& target,
                       const TractLabel& label, const Disk& cut_disk, double mesh) {
    for (const Cplx& p : target.points)
        if (!(p.real() > 0.0))
            throw DomainError("pullback_step: target leaves the right half-plane");
    Polyline pulled = pullback_only(lt, target, label, mesh);
    auto cut = cut_at_disk(pulled, cut_disk);
    return std::move(cut.curve);
}

namespace {

HairApproximation build_hair_impl(const LogTransform& lt, const ExternalAddress& address,
                                  const OrbitRecord& anchor, int depth_K, Cplx seed_offset,
                                  double truncation_re, double mesh) {
    if (anchor.verdict != sym::Verdict::Escaping)
        throw DomainError("build_hair: anchor orbit is not escaping");
    if (depth_K < 1) throw DomainError("build_hair: depth must be >= 1");
    // the top seeding level needs a label one past the address, which only a
    // periodic address can supply
    const int horizon =
        sym::detect_period(address) ? address.horizon : address.horizon - 1;
    if (depth_K > horizon - 1)
        throw DomainError("build_hair: insufficient horizon for requested depth");
    for (std::size_t i = 0; i < anchor.steps.size() && i < address.labels.size(); ++i)
        if (anchor.steps[i].tract && !(*anchor.steps[i].tract == address.labels[i]))
            throw DomainError("build_hair: address inconsistent with anchor orbit");

    const auto period = sym::detect_period(address);

    HairApproximation hair;
    hair.address = address;
    hair.depth_K = depth_K;
    hair.mesh = mesh;
    for (const auto& s : anchor.steps) hair.anchor_orbit.push_back(s.point);

    const auto disk_at = [&](int j) -> std::optional<Disk> {
        if (j >= static_cast<int>(hair.anchor_orbit.size())) return std::nullopt;
        const Cplx z = hair.anchor_orbit[j];
        if (!geom::finite(z)) return std::nullopt;
        return Disk{z, kCutRadius};
    };

    // j0: all anchors from there on lie in the unbounded part of tract & H
    hair.j0 = 0;
    for (int j = 0; j < static_cast<int>(hair.anchor_orbit.size()); ++j)
        if (!sym::in_unbounded_tract_component(lt, hair.anchor_orbit[j])) hair.j0 = j + 1;

    // seed level curves
    const double ln_t = std::log(lt.tract_threshold);
    const double re_from =
        std::max({lt.attraction_threshold, ln_t, 0.5}) + 0.7;
    const int n_seed = std::max(2, static_cast<int>((truncation_re - re_from) / mesh));
    std::vector<Polyline> cur(horizon + 1);
    std::vector<bool> active(horizon + 1, false);
    for (int j = 0; j <= horizon; ++j) {
        const TractLabel lab = label_at(address, period, j);
        Polyline seed = seed_tail_curve(lt, lab, re_from, truncation_re, n_seed);
        if (seed_offset != Cplx{}) {
            for (Cplx& p : seed.points) p += seed_offset;
            for (const Cplx& p : {seed.points.front(), seed.points.back()}) {
                const auto m = models::tract_membership(lt, p);
                if (!m || !(*m == lab))
                    throw DomainError("build_hair: offset seed exits tract");
            }
        }
        if (const auto d = disk_at(j)) {
            auto cut = cut_at_disk(seed, *d);
            cur[j] = std::move(cut.curve);
            active[j] = cut.active;
        } else {
            cur[j] = std::move(seed);
        }
    }

    for (int k = 1; k <= depth_K; ++k) {
        std::vector<Polyline> next(horizon + 1);
        std::vector<bool> next_active(horizon + 1, false);
        for (int j = 0; j + k <= horizon; ++j) {
            const TractLabel lab = label_at(address, period, j);
            Polyline pulled = pullback_only(lt, cur[j + 1], lab, mesh);
            extend_along_spine(lt, lab, pulled, truncation_re, mesh);
            if (const auto d = disk_at(j)) {
                auto cut = cut_at_disk(pulled, *d);
                next[j] = std::move(cut.curve);
                next_active[j] = cut.active;
            } else {
                next[j] = std::move(pulled);
            }
        }
        if (!cur[0].empty() && !next[0].empty())
            hair.depth_deltas.push_back(geom::hausdorff_distance(cur[0], next[0]));
        cur = std::move(next);
        active = std::move(next_active);
        hair.curve0_history.push_back(cur[0]);
    }

    const int levels = horizon - depth_K;
    hair.curves.assign(cur.begin(), cur.begin() + levels + 1);
    hair.cut_active.assign(active.begin(), active.begin() + levels + 1);
    return hair;
}

}  // namespace

HairApproximation build_hair(const LogTransform& lt, const ExternalAddress& address,
                             const OrbitRecord& anchor, int depth_K, double truncation_re,
                             double mesh) {
    return build_hair_impl(lt, address, anchor, depth_K, Cplx{}, truncation_re, mesh);
}

HairApproximation build_hair_offset(const LogTransform& lt, const ExternalAddress& address,
                                    const OrbitRecord& anchor, int depth_K, Cplx seed_offset,
                                    double truncation_re, double mesh) {
    return build_hair_impl(lt, address, anchor, depth_K, seed_offset, truncation_re, mesh);
}

double tract_boundary_re_infimum(const LogTransform& lt) {
    // Boundary of the restricted tract: the Re = R0 wall plus the curve
    // Re(e^w) = t for Re w > R0; sample both.
    const double ln_t = std::log(lt.tract_threshold);
    double inf_re = std::numeric_limits<double>::infinity();
    const double wall = lt.attraction_threshold;
    if (std::exp(wall) > lt.tract_threshold) inf_re = wall;  // wall is nonempty
    for (int i = 0; i <= 2000; ++i) {
        const double x = std::max(wall, ln_t) + 8.0 * i / 2000.0;
        if (std::exp(x) <= lt.tract_threshold) continue;
        inf_re = std::min(inf_re, x);
    }
    return inf_re;
}

MergeReport merge_test(const LogTransform& lt, const HairApproximation& a,
                       const HairApproximation& b) {
    if (!(a.address == b.address))
        throw DomainError("merge_test: hairs have different addresses");
    MergeReport rep;
    rep.sup_distance = geom::directed_sup_distance(a.curves[0], b.curves[0]);
    const std::size_t depths = std::min(a.curve0_history.size(), b.curve0_history.size());
    for (std::size_t d = 0; d < depths; ++d)
        rep.per_depth_sup.push_back(
            geom::directed_sup_distance(a.curve0_history[d], b.curve0_history[d]));
    const int depth = std::min(a.depth_K, b.depth_K);
    rep.merged = rep.sup_distance < std::pow(2.0, 1 - depth) * (kTwoPi / 2.0);
    rep.tract_re_infimum = tract_boundary_re_infimum(lt);
    rep.disjoint_type = rep.tract_re_infimum > 0.1;
    return rep;
}

EscapeAudit escape_audit(const LogTransform& lt, const HairApproximation& hair,
                         int sample_count, int horizon) {
    EscapeAudit audit;
    audit.samples = sample_count;
    if (sample_count <= 0 || hair.curves.empty() || hair.curves[0].empty()) return audit;
    const auto& pts = hair.curves[0].points;
    double worst_C = 0.0;
    for (int s = 0; s < sample_count; ++s) {
        const std::size_t idx =
            static_cast<std::size_t>((pts.size() - 1) * static_cast<double>(s) /
                                     std::max(1, sample_count - 1));
        const auto rec = sym::track_orbit(lt, pts[idx], horizon);
        if (rec.verdict == sym::Verdict::Escaping) ++audit.escaping;
        for (std::size_t i = 0; i + 1 < rec.steps.size(); ++i)
            worst_C = std::max(worst_C,
                               2.0 * rec.steps[i].re_part - rec.steps[i + 1].re_part);
    }
    audit.fraction = static_cast<double>(audit.escaping) / sample_count;
    audit.min_growth_margin = worst_C;
    return audit;
}

HairInvariantReport check_hair_invariants(const LogTransform& lt,
                                          const HairApproximation& hair) {
    HairInvariantReport rep;
    const int levels = static_cast<int>(hair.curves.size());
    for (int j = 0; j < levels; ++j) {
        if (j >= static_cast<int>(hair.anchor_orbit.size())) break;
        const Cplx z = hair.anchor_orbit[j];
        if (!geom::finite(z) || !hair.cut_active[j]) continue;
        double min_gap = std::numeric_limits<double>::infinity();
        for (const Cplx& p : hair.curves[j].points) {
            const double r = std::abs(p - z);
            rep.worst_disk_violation = std::max(rep.worst_disk_violation, kCutRadius - r);
            min_gap = std::min(min_gap, std::abs(r - kCutRadius));
        }
        if (rep.worst_boundary_gap > 1e299) rep.worst_boundary_gap = min_gap;
        rep.worst_boundary_gap = std::max(rep.worst_boundary_gap, min_gap);
    }
    // forward inclusion, asserted up to the next level's truncation
    for (int j = 0; j + 1 < levels; ++j) {
        const TractLabel lab = hair.address.labels[j];
        geom::PolylineIndex idx(hair.curves[j + 1]);
        const auto& pts = hair.curves[j].points;
        const std::size_t stride = std::max<std::size_t>(1, pts.size() / 2000);
        for (std::size_t i = 0; i < pts.size(); i += stride) {
            const auto r = models::eval_F_unchecked(lt, pts[i], lab.base);
            if (r.escaped_by_overflow) continue;
            if (r.value.real() > hair.curves[j + 1].truncation_re - 1.0) continue;
            if (!(r.value.real() > 0.0)) continue;
            rep.worst_forward_residual =
                std::max(rep.worst_forward_residual, idx.distance(r.value));
            ++rep.forward_points_checked;
        }
    }
    return rep;
}

}  // namespace escaping::hairs
