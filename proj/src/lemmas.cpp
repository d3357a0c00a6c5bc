#include "escaping/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

#include "escaping/errors.hpp"

namespace escaping::lemmas {

namespace {

using geom::kTwoPi;

bool segments_intersect(const Cplx& a, const Cplx& b, const Cplx& c, const Cplx& d) {
    const auto cross = [](const Cplx& u, const Cplx& v) {
        return u.real() * v.imag() - u.imag() * v.real();
    };
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return true;
    return false;
}

}  // namespace

double SyntheticTract::max_re() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const Cplx& p : boundary.points) m = std::max(m, p.real());
    return m;
}

bool certify_translate_disjoint(SyntheticTract& t) {
    const auto& pts = t.boundary.points;
    const std::size_t n = pts.size();
    // simplicity: no two non-adjacent segments intersect
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 2; j + 1 < n; ++j) {
            if (i == 0 && j + 2 == n) continue;  // closing segment adjacency
            if (segments_intersect(pts[i], pts[i + 1], pts[j], pts[j + 1])) return false;
        }
    const Cplx up{0.0, kTwoPi};
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = 0; j + 1 < n; ++j)
            if (segments_intersect(pts[i], pts[i + 1], pts[j] + up, pts[j + 1] + up))
                return false;
    t.period_disjoint = true;
    return true;
}

bool inside_tract(const SyntheticTract& t, const Cplx& z) {
    // even-odd ray crossing
    const auto& pts = t.boundary.points;
    bool in = false;
    for (std::size_t i = 0, j = pts.size() - 1; i < pts.size(); j = i++) {
        const double yi = pts[i].imag(), yj = pts[j].imag();
        const double xi = pts[i].real(), xj = pts[j].real();
        if ((yi > z.imag()) != (yj > z.imag())) {
            const double xcross = xi + (z.imag() - yi) / (yj - yi) * (xj - xi);
            if (z.real() < xcross) in = !in;
        }
    }
    return in;
}

namespace {

// Scanline raster of the tract interior on a regular grid.
struct Raster {
    double x0, y0, step;
    int nx, ny;
    std::vector<std::uint8_t> inside;  // nx * ny

    int idx(int i, int j) const { return j * nx + i; }
    bool in(int i, int j) const {
        return i >= 0 && i < nx && j >= 0 && j < ny && inside[idx(i, j)];
    }
    Cplx center(int i, int j) const { return {x0 + (i + 0.5) * step, y0 + (j + 0.5) * step}; }
    int cell_x(double x) const { return static_cast<int>(std::floor((x - x0) / step)); }
    int cell_y(double y) const { return static_cast<int>(std::floor((y - y0) / step)); }
};

Raster rasterize(const SyntheticTract& t, double step) {
    const auto& pts = t.boundary.points;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const Cplx& p : pts) {
        xmin = std::min(xmin, p.real());
        xmax = std::max(xmax, p.real());
        ymin = std::min(ymin, p.imag());
        ymax = std::max(ymax, p.imag());
    }
    Raster r;
    r.step = step;
    r.x0 = xmin - step;
    r.y0 = ymin - step;
    r.nx = static_cast<int>((xmax - xmin) / step) + 3;
    r.ny = static_cast<int>((ymax - ymin) / step) + 3;
    if (static_cast<long long>(r.nx) * r.ny > 8'000'000)
        throw DomainError("separation_check: grid too large; increase grid_step");
    r.inside.assign(static_cast<std::size_t>(r.nx) * r.ny, 0);
    for (int j = 0; j < r.ny; ++j) {
        const double y = r.y0 + (j + 0.5) * step;
        std::vector<double> xs;
        for (std::size_t i = 0, k = pts.size() - 1; i < pts.size(); k = i++) {
            const double yi = pts[i].imag(), yk = pts[k].imag();
            if ((yi > y) != (yk > y))
                xs.push_back(pts[i].real() +
                             (y - yi) / (yk - yi) * (pts[k].real() - pts[i].real()));
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t m = 0; m + 1 < xs.size(); m += 2) {
            int ia = std::max(0, r.cell_x(xs[m]) + 1);
            int ib = std::min(r.nx - 1, r.cell_x(xs[m + 1]) - 1);
            for (int i = ia; i <= ib; ++i) r.inside[r.idx(i, j)] = 1;
        }
    }
    return r;
}

// Minimal neck width, estimated by sampling boundary points against
// non-adjacent boundary segments.
double estimate_neck(const SyntheticTract& t) {
    const auto& pts = t.boundary.points;
    double neck = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        for (int s = 0; s < 4; ++s) {
            const Cplx p = pts[i] + (pts[i + 1] - pts[i]) * (s / 4.0);
            for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
                if (j + 1 >= i && j <= i + 1) continue;  // adjacent
                const double d =
                    geom::point_to_segment_distance(p, pts[j], pts[j + 1]);
                if (d > 1e-12) neck = std::min(neck, d);
            }
        }
    }
    return neck;
}

// Flood fill from all inside cells in the rightmost populated column,
// the finite proxy for "unbounded component".
std::vector<std::uint8_t> flood_from_truncation(
    const Raster& r, const std::function<bool(int, int)>& passable) {
    std::vector<std::uint8_t> mark(r.inside.size(), 0);
    std::queue<std::pair<int, int>> q;
    int col = r.nx - 1;
    for (; col >= 0; --col) {
        bool any = false;
        for (int j = 0; j < r.ny; ++j)
            if (r.in(col, j) && passable(col, j)) {
                mark[r.idx(col, j)] = 1;
                q.push({col, j});
                any = true;
            }
        if (any) break;
    }
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    while (!q.empty()) {
        auto [i, j] = q.front();
        q.pop();
        for (int d = 0; d < 4; ++d) {
            const int ni = i + dx[d], nj = j + dy[d];
            if (!r.in(ni, nj) || !passable(ni, nj)) continue;
            auto& m = mark[r.idx(ni, nj)];
            if (m) continue;
            m = 1;
            q.push({ni, nj});
        }
    }
    return mark;
}

}  // namespace

SeparationVerdict separation_check(const SyntheticTract& t, const Cplx& z, double R,
                                   double grid_step) {
    SeparationVerdict v;
    double neck = estimate_neck(t);
    if (!std::isfinite(neck) || neck <= 0) neck = 0.5;
    v.grid_step = grid_step > 0 ? grid_step : neck / 32.0;
    const Raster r = rasterize(t, v.grid_step);
    const int zi = r.cell_x(z.real());
    const int zj = r.cell_y(z.imag());
    if (!r.in(zi, zj)) {
        // the grid failed to resolve the cell containing z
        v.resolved = false;
        return v;
    }
    // (a): unbounded component of {Re > R} in T
    const auto above_R = [&](int i, int j) { return r.center(i, j).real() > R; };
    const auto markA = flood_from_truncation(r, above_R);
    v.in_unbounded_re_component = markA[r.idx(zi, zj)] != 0;
    // (b): unbounded component of T minus the segment [z - 2 pi i, z + 2 pi i]
    const double seg_lo = z.imag() - kTwoPi, seg_hi = z.imag() + kTwoPi;
    const auto not_blocked = [&](int i, int j) {
        const Cplx c = r.center(i, j);
        const double half = 0.5 * r.step;
        // tolerance keeps the blocking column watertight under fp rounding
        const double tol = 1e-9 * (1.0 + std::abs(z.real()));
        if (std::abs(c.real() - z.real()) > half + tol) return true;
        return c.imag() + half < seg_lo || c.imag() - half > seg_hi;
    };
    const auto markB = flood_from_truncation(r, not_blocked);
    v.tilde_contained = true;
    for (std::size_t k = 0; k < markB.size(); ++k)
        if (markB[k] && !markA[k]) {
            v.tilde_contained = false;
#ifdef DEBUG_SEP
            {
                const int i = static_cast<int>(k) % r.nx, j = static_cast<int>(k) / r.nx;
                fprintf(stderr, "mismatch cell (%g, %g)\n", r.center(i, j).real(),
                        r.center(i, j).imag());
                continue;
            }
#endif
            break;
        }
    return v;
}

ProximityVerdict proximity_check(const SyntheticTract& t, const Polyline& c0,
                                 const Polyline& c1, double tolerance) {
    for (const auto* c : {&c0, &c1})
        for (const Cplx& p : c->points)
            if (!inside_tract(t, p))
                throw DomainError("proximity_check: curve exits the tract");
    ProximityVerdict v;
    v.sup0 = geom::directed_sup_distance(c0, c1);
    v.sup1 = geom::directed_sup_distance(c1, c0);
    v.within_2pi = std::min(v.sup0, v.sup1) <= kTwoPi + tolerance;
    return v;
}

Serpentine make_serpentine(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Serpentine s;
    s.seed = seed;
    s.u_turns = 1 + static_cast<int>(unif(rng) * 4.0);
    if (s.u_turns > 4) s.u_turns = 4;
    const int corridors = s.u_turns + 1;
    double h = 0.4 + 0.5 * unif(rng);
    double g = 0.2 + 0.3 * unif(rng);
    double total = corridors * h + (corridors - 1) * g;
    if (total > 5.8) {
        const double sc = 5.8 / total;
        h *= sc;
        g *= sc;
    }
    s.corridor_height = h;
    const double x_max = 30.0;
    const double y0 = unif(rng) * 2.0;
    // axis-aligned spine: right end open, alternating left/right turns
    std::vector<Cplx> spine;
    spine.push_back({x_max, y0});
    double y = y0;
    for (int c = 0; c < corridors; ++c) {
        const bool leftward = (c % 2 == 0);
        const double xl = 2.0 + 6.0 * unif(rng);
        const double xr = 16.0 + 8.0 * unif(rng);
        const double x_end = leftward ? xl : xr;
        spine.push_back({x_end, y});
        if (c + 1 < corridors) {
            y -= (h + g);
            spine.push_back({x_end, y});
        }
    }
    s.corridor_spine = spine;
    // keep the stored spine strictly inside the polygon: both the truncation
    // edge and the dead-end cap pass through the raw spine endpoints
    s.corridor_spine[0] -= Cplx{0.05, 0.0};
    {
        auto& tip = s.corridor_spine.back();
        const Cplx prev = s.corridor_spine[s.corridor_spine.size() - 2];
        tip += 0.05 * (prev - tip) / std::abs(prev - tip);
    }

    // thicken the spine by h/2 on both sides (axis-aligned offset walk)
    const double r = h / 2.0;
    const auto offset_side = [&](double sgn) {
        std::vector<Cplx> side;
        const std::size_t m = spine.size();
        std::vector<Cplx> normals(m - 1);
        for (std::size_t i = 0; i + 1 < m; ++i) {
            const Cplx d = spine[i + 1] - spine[i];
            const double len = std::abs(d);
            normals[i] = Cplx{-d.imag() / len, d.real() / len} * sgn * r;
        }
        side.push_back(spine[0] + normals[0]);
        for (std::size_t i = 1; i + 1 < m; ++i) {
            // axis-aligned corner: x from the vertical line, y from the horizontal
            const Cplx a = spine[i] + normals[i - 1];
            const Cplx b = spine[i] + normals[i];
            const bool prev_horizontal =
                std::abs(spine[i].imag() - spine[i - 1].imag()) < 1e-12;
            side.push_back(prev_horizontal ? Cplx{b.real(), a.imag()}
                                           : Cplx{a.real(), b.imag()});
        }
        side.push_back(spine[m - 1] + normals[m - 2]);
        return side;
    };
    const auto left = offset_side(1.0);
    auto right = offset_side(-1.0);
    std::vector<Cplx> poly(left.begin(), left.end());
    // cap at the dead end
    std::reverse(right.begin(), right.end());
    poly.insert(poly.end(), right.begin(), right.end());
    poly.push_back(poly.front());  // close across the truncation edge
    s.tract.boundary.points = std::move(poly);
    s.tract.boundary.truncation_re = x_max;
    certify_translate_disjoint(s.tract);
    return s;
}

SyntheticTract make_tall_control(double height) {
    SyntheticTract t;
    const double x_max = 30.0, x_min = 2.0;
    t.boundary.points = {{x_max, height / 2},  {x_min, height / 2}, {x_min, -height / 2},
                         {x_max, -height / 2}, {x_max, height / 2}};
    t.boundary.truncation_re = x_max;
    t.period_disjoint = height < kTwoPi;
    return t;
}

CampaignReport run_campaign(int trials, std::uint64_t seed) {
    CampaignReport rep;
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < trials; ++trial) {
        const std::uint64_t trial_seed = rng();
        Serpentine s = make_serpentine(trial_seed);
        CampaignTrial tr;
        tr.seed = trial_seed;
        // R between the left turns and the right turns, so doubled-back
        // fingers have points above R in bounded components
        const double R = 12.0;
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::vector<Cplx> samples;
        for (const Cplx& p : s.corridor_spine)
            if (p.real() > R + 0.5) samples.push_back(p - Cplx{0.5, 0.0});
        while (samples.size() < 10) {
            // random interior points on corridor centerlines
            const std::size_t c = 2 * static_cast<std::size_t>(
                                          unif(rng) * ((s.corridor_spine.size() - 1) / 2));
            const Cplx a = s.corridor_spine[c];
            const Cplx b = s.corridor_spine[std::min(c + 1, s.corridor_spine.size() - 1)];
            const Cplx p = a + unif(rng) * (b - a);
            if (p.real() > R) samples.push_back(p);
        }
        samples.resize(10);
        for (const Cplx& z : samples) {
            if (!inside_tract(s.tract, z)) continue;
            const auto v = separation_check(s.tract, z, R, s.corridor_height / 16.0);
            if (!v.resolved) {
                tr.resolved = false;
                continue;
            }
            if (v.in_unbounded_re_component && !v.tilde_contained) tr.separation_ok = false;
        }
        // proximity: spine vs a parallel curve in the entry corridor
        Polyline c0;
        c0.points = s.corridor_spine;
        std::reverse(c0.points.begin(), c0.points.end());
        c0.truncation_re = s.tract.boundary.truncation_re;
        Polyline c1;
        const double y1 = s.corridor_spine[0].imag() + s.corridor_height / 4.0;
        const double xl = s.corridor_spine[1].real() + 0.2;
        c1.points = {{xl, y1}, {s.tract.boundary.truncation_re - 0.05, y1}};
        c1.truncation_re = s.tract.boundary.truncation_re;
        const auto pv = proximity_check(s.tract, c0, c1);
        if (!pv.within_2pi) tr.proximity_ok = false;

        if (!tr.separation_ok) ++rep.separation_counterexamples;
        if (!tr.proximity_ok) ++rep.proximity_counterexamples;
        if (!tr.resolved) ++rep.unresolved;
        rep.trials.push_back(tr);
    }

    // designed violation: a tall translate-overlapping strip
    SyntheticTract control = make_tall_control(8.0);
    const Cplx zc{20.0, 3.5};
    const auto sv = separation_check(control, zc, 10.0, 0.1);
    bool violated = sv.in_unbounded_re_component && !sv.tilde_contained;
    Polyline top, bottom;
    top.points = {{3.0, 3.6}, {29.9, 3.6}};
    top.truncation_re = 30.0;
    bottom.points = {{3.0, -3.6}, {29.9, -3.6}};
    bottom.truncation_re = 30.0;
    const auto pvc = proximity_check(control, top, bottom);
    if (!pvc.within_2pi) violated = true;
    rep.control_violated = violated;
    return rep;
}

}  // namespace escaping::lemmas
