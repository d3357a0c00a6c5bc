#include "escaping/render.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "escaping/errors.hpp"
#include "render_kernels.hpp"

namespace escaping::render {

namespace detail {

void escape_row_scalar(const KernelParams& p, const double* zr0, const double* zi0, int n,
                       int* out_iters) {
    for (int i = 0; i < n; ++i) {
        double zr = zr0[i], zi = zi0[i];
        int iters = -1;
        for (int it = 1; it <= p.horizon; ++it) {
            double wr, wi;
            if (p.family == 0) {
                const double e = std::exp(p.K * zr);
                const double s = std::sin(p.K * zi);
                const double c = std::cos(p.K * zi);
                wr = e * c;
                wi = e * s;
            } else {
                const double ep = std::exp(p.K * zr);
                const double em = std::exp(-(p.K * zr));
                const double s = std::sin(p.K * zi);
                const double c = std::cos(p.K * zi);
                const double ch = 0.5 * (ep + em);
                const double sh = 0.5 * (ep - em);
                wr = ch * c;
                wi = sh * s;
            }
            const double nr = p.Ar * wr - p.Ai * wi;
            const double ni = p.Ar * wi + p.Ai * wr;
            zr = nr;
            zi = ni;
            const double n2 = zr * zr + zi * zi;
            if (!(n2 <= p.esc2)) {  // catches NaN as escaped
                iters = it;
                break;
            }
        }
        out_iters[i] = iters;
    }
}

}  // namespace detail

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Cplx pixel_to_plane(const RenderJob& job, double px, double py) {
    const double x =
        job.window.center.real() - job.window.width / 2 + (px + 0.5) * job.window.width / job.px_w;
    const double y = job.window.center.imag() + job.window.height / 2 -
                     (py + 0.5) * job.window.height / job.px_h;
    return {x, y};
}

std::pair<double, double> plane_to_pixel(const RenderJob& job, const Cplx& z) {
    const double px =
        (z.real() - (job.window.center.real() - job.window.width / 2)) * job.px_w /
            job.window.width -
        0.5;
    const double py =
        ((job.window.center.imag() + job.window.height / 2) - z.imag()) * job.px_h /
            job.window.height -
        0.5;
    return {px, py};
}

std::vector<int> escape_iterations(const RenderJob& job, bool force_scalar, int threads) {
    if (job.px_w <= 0 || job.px_h <= 0 || job.px_w > 16384 || job.px_h > 16384)
        throw DomainError("escape_iterations: resolution out of range");
    detail::KernelParams p;
    const auto& lt = job.transform;
    p.K = lt.scale_K;
    Cplx A;
    if (lt.model.family == models::Family::Exponential) {
        p.family = 0;
        A = lt.model.parameter / lt.scale_K;
    } else {
        p.family = 1;
        A = lt.model.parameter / (2.0 * lt.scale_K);
    }
    p.Ar = A.real();
    p.Ai = A.imag();
    p.esc2 = job.escape_modulus * job.escape_modulus;
    p.horizon = job.horizon;

    auto row_kernel = detail::escape_row_scalar;
#if defined(__x86_64__) || defined(_M_X64)
    if (!force_scalar && avx2_available()) row_kernel = detail::escape_row_avx2;
#else
    (void)force_scalar;
#endif

    const bool log_plane = job.mode != RenderMode::PlaneEscapeTime;
    std::vector<int> iters(static_cast<std::size_t>(job.px_w) * job.px_h);
    const auto do_rows = [&](int r0, int r1) {
        std::vector<double> zr(job.px_w), zi(job.px_w);
        for (int r = r0; r < r1; ++r) {
            for (int c = 0; c < job.px_w; ++c) {
                Cplx z = pixel_to_plane(job, c, r);
                if (log_plane) z = std::exp(z);
                zr[c] = z.real();
                zi[c] = z.imag();
            }
            row_kernel(p, zr.data(), zi.data(), job.px_w,
                       iters.data() + static_cast<std::size_t>(r) * job.px_w);
        }
    };
    if (threads <= 1) {
        do_rows(0, job.px_h);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (job.px_h + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int r0 = t * chunk;
            const int r1 = std::min(job.px_h, r0 + chunk);
            if (r0 < r1) pool.emplace_back(do_rows, r0, r1);
        }
        for (auto& th : pool) th.join();
    }
    return iters;
}

const std::array<std::array<std::uint8_t, 3>, 256>& palette() {
    static const auto table = [] {
        std::array<std::array<std::uint8_t, 3>, 256> t{};
        for (int i = 0; i < 256; ++i) {
            const double u = i / 255.0;
            const auto chan = [&](double phase) {
                const double v = 0.5 + 0.5 * std::sin(6.28318530717958647692 * (3.0 * u + phase));
                return static_cast<std::uint8_t>(std::lround(255.0 * v));
            };
            t[i] = {chan(0.0), chan(1.0 / 3.0), chan(2.0 / 3.0)};
        }
        return t;
    }();
    return table;
}

namespace {

Image image_from_iterations(const RenderJob& job, const std::vector<int>& iters,
                            double* fraction) {
    Image img;
    img.w = job.px_w;
    img.h = job.px_h;
    img.rgb.assign(static_cast<std::size_t>(img.w) * img.h * 3, 0);
    const auto& pal = palette();
    std::size_t escaping = 0;
    const int denom = std::max(1, job.horizon);
    for (std::size_t k = 0; k < iters.size(); ++k) {
        if (iters[k] < 0) continue;
        ++escaping;
        const auto& c = pal[std::min(255, iters[k] * 255 / denom)];
        img.rgb[3 * k + 0] = c[0];
        img.rgb[3 * k + 1] = c[1];
        img.rgb[3 * k + 2] = c[2];
    }
    if (fraction) *fraction = iters.empty() ? 0.0 : static_cast<double>(escaping) / iters.size();
    return img;
}

void put_pixel(Image& img, int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    if (x < 0 || y < 0 || x >= img.w || y >= img.h) return;
    const std::size_t k = (static_cast<std::size_t>(y) * img.w + x) * 3;
    img.rgb[k] = r;
    img.rgb[k + 1] = g;
    img.rgb[k + 2] = b;
}

}  // namespace

Image render_escape_time(const RenderJob& job, RenderStats* stats, bool force_scalar,
                         int threads) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto iters = escape_iterations(job, force_scalar, threads);
    double fraction = 0.0;
    Image img = image_from_iterations(job, iters, &fraction);
    if (stats) {
        stats->escaping_fraction = fraction;
        stats->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        stats->kernel = (!force_scalar && avx2_available()) ? "avx2" : "scalar";
    }
    return img;
}

Image render_hair_overlay(const RenderJob& job, const hairs::HairApproximation& hair,
                          OverlayAudit* audit, RenderStats* stats, bool force_scalar,
                          int threads) {
    RenderJob base = job;
    if (base.mode == RenderMode::HairOverlay) base.mode = RenderMode::LogPlaneEscapeTime;
    const auto t0 = std::chrono::steady_clock::now();
    const auto iters = escape_iterations(base, force_scalar, threads);
    double fraction = 0.0;
    Image img = image_from_iterations(base, iters, &fraction);

    const auto escaping_near = [&](int x, int y) {
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                const int nx = x + dx, ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= img.w || ny >= img.h) continue;
                if (iters[static_cast<std::size_t>(ny) * img.w + nx] >= 0) return true;
            }
        return false;
    };

    OverlayAudit a;
    std::vector<std::uint8_t> drawn(static_cast<std::size_t>(img.w) * img.h, 0);
    for (const auto& curve : hair.curves) {
        for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
            const auto [pax, pay] = plane_to_pixel(base, curve.points[i]);
            const auto [pbx, pby] = plane_to_pixel(base, curve.points[i + 1]);
            const int steps =
                2 + static_cast<int>(std::hypot(pbx - pax, pby - pay) * 2.0);
            for (int s = 0; s <= steps; ++s) {
                const double t = static_cast<double>(s) / steps;
                const int x = static_cast<int>(std::lround(pax + t * (pbx - pax)));
                const int y = static_cast<int>(std::lround(pay + t * (pby - pay)));
                if (x < 0 || y < 0 || x >= img.w || y >= img.h) continue;
                auto& d = drawn[static_cast<std::size_t>(y) * img.w + x];
                if (!d) {
                    d = 1;
                    ++a.curve_pixels;
                    if (escaping_near(x, y)) ++a.on_escaping;
                }
                put_pixel(img, x, y, 255, 255, 255);
            }
        }
    }
    for (std::size_t j = 0; j < hair.anchor_orbit.size(); ++j) {
        if (j < hair.cut_active.size() && !hair.cut_active[j]) continue;
        const Cplx zc = hair.anchor_orbit[j];
        for (int s = 0; s < 720; ++s) {
            const double th = s * 6.28318530717958647692 / 720;
            const Cplx p = zc + hair.disk_radius * Cplx{std::cos(th), std::sin(th)};
            const auto [px, py] = plane_to_pixel(base, p);
            put_pixel(img, static_cast<int>(std::lround(px)),
                      static_cast<int>(std::lround(py)), 255, 64, 64);
        }
    }
    a.fraction = a.curve_pixels ? static_cast<double>(a.on_escaping) / a.curve_pixels : 1.0;
    if (audit) *audit = a;
    if (stats) {
        stats->escaping_fraction = fraction;
        stats->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        stats->kernel = (!force_scalar && avx2_available()) ? "avx2" : "scalar";
    }
    return img;
}

void write_ppm(const Image& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_ppm: cannot open " + path);
    out << "P6\n" << img.w << " " << img.h << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.rgb.data()),
              static_cast<std::streamsize>(img.rgb.size()));
    if (!out) throw std::runtime_error("write_ppm: short write to " + path);
}

}  // namespace escaping::render
