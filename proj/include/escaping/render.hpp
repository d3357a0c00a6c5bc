#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "escaping/hairs.hpp"
#include "escaping/models.hpp"

namespace escaping::render {

using geom::Cplx;

enum class RenderMode { PlaneEscapeTime, LogPlaneEscapeTime, HairOverlay };

struct Window {
    Cplx center{0.0, 0.0};
    double width = 8.0;
    double height = 8.0;
};

struct RenderJob {
    models::LogTransform transform;
    Window window;
    int px_w = 400;
    int px_h = 400;
    int horizon = 60;
    RenderMode mode = RenderMode::PlaneEscapeTime;
    double escape_modulus = 1e6;
};

struct Image {
    int w = 0;
    int h = 0;
    std::vector<std::uint8_t> rgb;  // 3 * w * h, row-major, top row first
};

struct RenderStats {
    double escaping_fraction = 0.0;
    double seconds = 0.0;
    std::string kernel;  // "scalar" or "avx2"
};

// Center of pixel (px, py) in plane coordinates (py = 0 is the top row).
Cplx pixel_to_plane(const RenderJob& job, double px, double py);
// Inverse of pixel_to_plane (fractional pixel coordinates).
std::pair<double, double> plane_to_pixel(const RenderJob& job, const Cplx& z);

bool avx2_available();

// First iteration index at which the orbit of each pixel's point under the
// rescaled map exceeds the escape modulus (-1 when it never does within the
// horizon). LogPlane modes exponentiate the pixel coordinate first.
std::vector<int> escape_iterations(const RenderJob& job, bool force_scalar = false,
                                   int threads = 1);

extern const std::array<std::array<std::uint8_t, 3>, 256>& palette();

Image render_escape_time(const RenderJob& job, RenderStats* stats = nullptr,
                         bool force_scalar = false, int threads = 1);

struct OverlayAudit {
    int curve_pixels = 0;
    int on_escaping = 0;  // escaping or within one pixel of an escaping pixel
    double fraction = 0.0;
};

// Escape-time base layer plus hair curves (white) and the cut circles
// (red) drawn on top. The audit classifies every drawn curve pixel
// against the base layer before drawing.
Image render_hair_overlay(const RenderJob& job, const hairs::HairApproximation& hair,
                          OverlayAudit* audit = nullptr, RenderStats* stats = nullptr,
                          bool force_scalar = false, int threads = 1);

void write_ppm(const Image& img, const std::string& path);

}  // namespace escaping::render
