#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dreadlock/periodic_points.hpp"
#include "dreadlock/pullback.hpp"

namespace dreadlock {

struct RenderSpec {
    Window window{-5, 5, -5, 5};
    int width = 512;
    int height = 512;
    int max_iter = 64;
    double escape_radius = 1e3;
    std::vector<RayPolyline> overlays;
    std::vector<PeriodicPoint> marks;
    int max_side = 4096;
};

struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // row-major, top row first

    std::uint8_t* pixel(int x, int y) { return rgb.data() + 3 * (static_cast<std::size_t>(y) * width + x); }
    const std::uint8_t* pixel(int x, int y) const {
        return rgb.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }
};

/// Pixel coordinates (column, row) of z; pixel centres sit at integers.
struct PixelPos {
    double x, y;
};
PixelPos to_pixel(const RenderSpec& spec, cplx z);

/// Escape-time raster plus overlays and marks. Throws ResolutionCap when a
/// side exceeds spec.max_side and PreconditionViolated on a bad spec.
Image render(const EntireMap& m, const RenderSpec& spec, int threads = 0);

void write_ppm(const Image& img, const std::string& path);
std::string ppm_bytes(const Image& img);

/// Overlays and marks only, in pixel coordinates of the same raster.
std::string svg_overlay(const RenderSpec& spec);
void write_svg(const RenderSpec& spec, const std::string& path);

}  // namespace dreadlock
