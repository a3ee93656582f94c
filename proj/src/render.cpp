#include "dreadlock/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "dreadlock/parallel.hpp"

namespace dreadlock {

namespace {

struct Rgb {
    std::uint8_t r, g, b;
};

constexpr Rgb kRayColors[] = {{255, 64, 64}, {64, 200, 255}, {255, 220, 0}, {120, 255, 120},
                              {255, 120, 255}, {255, 160, 60}};

Rgb mark_color(const Classification& c) {
    if (c.is_repelling()) return {255, 0, 0};
    if (c.is_parabolic()) return {255, 255, 0};
    if (c.kind == Classification::Kind::Attracting) return {0, 128, 255};
    return {255, 255, 255};
}

// Escape-time palette: integer arithmetic only, so the raster is bit-exact.
Rgb escape_color(int n, int max_iter) {
    if (n >= max_iter) return {0, 0, 0};
    const int t = (n * 255) / std::max(1, max_iter - 1);
    return {static_cast<std::uint8_t>(t), static_cast<std::uint8_t>((t * 3) % 256),
            static_cast<std::uint8_t>(255 - t)};
}

int escape_count(const EntireMap& m, cplx z, int max_iter, double radius) {
    for (int n = 0; n < max_iter; ++n) {
        if (std::abs(z) > radius) return n;
        auto next = m.eval(z);
        if (!next) return n + 1;
        z = *next;
    }
    return max_iter;
}

void put(Image& img, long x, long y, Rgb c) {
    if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
    auto* p = img.pixel(static_cast<int>(x), static_cast<int>(y));
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
}

// Liang-Barsky clip of the segment to the box [lo, hi]^2; false if nothing is left.
bool clip(double& x0, double& y0, double& x1, double& y1, double xlo, double xhi, double ylo, double yhi) {
    double t0 = 0, t1 = 1;
    const double dx = x1 - x0, dy = y1 - y0;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {x0 - xlo, xhi - x0, y0 - ylo, yhi - y0};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0) {
            if (q[i] < 0) return false;
            continue;
        }
        const double t = q[i] / p[i];
        if (p[i] < 0) t0 = std::max(t0, t);
        else t1 = std::min(t1, t);
        if (t0 > t1) return false;
    }
    const double nx0 = x0 + t0 * dx, ny0 = y0 + t0 * dy;
    x1 = x0 + t1 * dx;
    y1 = y0 + t1 * dy;
    x0 = nx0;
    y0 = ny0;
    return true;
}

void draw_line(Image& img, PixelPos a, PixelPos b, Rgb c) {
    double x0 = a.x, y0 = a.y, x1 = b.x, y1 = b.y;
    if (!std::isfinite(x0) || !std::isfinite(y0) || !std::isfinite(x1) || !std::isfinite(y1)) return;
    if (!clip(x0, y0, x1, y1, -0.5, img.width - 0.5, -0.5, img.height - 0.5)) return;
    long ix0 = std::lround(x0), iy0 = std::lround(y0);
    const long ix1 = std::lround(x1), iy1 = std::lround(y1);
    const long dx = std::labs(ix1 - ix0), dy = -std::labs(iy1 - iy0);
    const long sx = ix0 < ix1 ? 1 : -1, sy = iy0 < iy1 ? 1 : -1;
    long err = dx + dy;
    while (true) {
        put(img, ix0, iy0, c);
        if (ix0 == ix1 && iy0 == iy1) break;
        const long e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            ix0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            iy0 += sy;
        }
    }
}

void validate(const RenderSpec& spec) {
    if (spec.width < 1 || spec.height < 1 || spec.window.degenerate() || spec.max_iter < 1 ||
        !(spec.escape_radius > 0))
        throw DynamicsError(ErrorKind::PreconditionViolated, "invalid render spec");
    if (spec.width > spec.max_side || spec.height > spec.max_side)
        throw DynamicsError(ErrorKind::ResolutionCap, "resolution exceeds " + std::to_string(spec.max_side) +
                                                          " pixels per side");
}

}  // namespace

PixelPos to_pixel(const RenderSpec& spec, cplx z) {
    const auto& w = spec.window;
    return {(z.real() - w.re_min) / (w.re_max - w.re_min) * spec.width - 0.5,
            (w.im_max - z.imag()) / (w.im_max - w.im_min) * spec.height - 0.5};
}

Image render(const EntireMap& m, const RenderSpec& spec, int threads) {
    validate(spec);
    Image img{spec.width, spec.height, std::vector<std::uint8_t>(3 * static_cast<std::size_t>(spec.width) * spec.height)};
    const auto& w = spec.window;
    const double dx = (w.re_max - w.re_min) / spec.width;
    const double dy = (w.im_max - w.im_min) / spec.height;
    auto rows = parallel_map<std::vector<std::uint8_t>>(
        static_cast<std::size_t>(spec.height),
        [&](std::size_t j) {
            std::vector<std::uint8_t> row(3 * static_cast<std::size_t>(spec.width));
            const double y = w.im_max - (j + 0.5) * dy;
            for (int i = 0; i < spec.width; ++i) {
                const cplx z{w.re_min + (i + 0.5) * dx, y};
                const Rgb c = escape_color(escape_count(m, z, spec.max_iter, spec.escape_radius), spec.max_iter);
                row[3 * i] = c.r;
                row[3 * i + 1] = c.g;
                row[3 * i + 2] = c.b;
            }
            return row;
        },
        threads);
    for (int j = 0; j < spec.height; ++j) std::copy(rows[j].begin(), rows[j].end(), img.pixel(0, j));

    for (std::size_t r = 0; r < spec.overlays.size(); ++r) {
        const Rgb c = kRayColors[r % std::size(kRayColors)];
        const auto& v = spec.overlays[r].vertices;
        for (std::size_t i = 1; i < v.size(); ++i) draw_line(img, to_pixel(spec, v[i - 1]), to_pixel(spec, v[i]), c);
        if (v.size() == 1) draw_line(img, to_pixel(spec, v[0]), to_pixel(spec, v[0]), c);
    }
    for (const auto& mark : spec.marks) {
        const PixelPos p = to_pixel(spec, mark.point);
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) continue;
        const long cx = std::lround(p.x), cy = std::lround(p.y);
        const Rgb c = mark_color(mark.classification);
        for (long d = -2; d <= 2; ++d) {
            put(img, cx + d, cy, c);
            put(img, cx, cy + d, c);
        }
    }
    return img;
}

std::string ppm_bytes(const Image& img) {
    std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(img.rgb.data()), img.rgb.size());
    return out;
}

namespace {

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DynamicsError(ErrorKind::IoError, "cannot open '" + path + "' for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw DynamicsError(ErrorKind::IoError, "write to '" + path + "' failed");
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

void write_ppm(const Image& img, const std::string& path) { write_file(path, ppm_bytes(img)); }

std::string svg_overlay(const RenderSpec& spec) {
    validate(spec);
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) +
                      "\" height=\"" + std::to_string(spec.height) + "\" viewBox=\"-0.5 -0.5 " +
                      std::to_string(spec.width) + " " + std::to_string(spec.height) + "\">\n";
    for (std::size_t r = 0; r < spec.overlays.size(); ++r) {
        const Rgb c = kRayColors[r % std::size(kRayColors)];
        out += "  <polyline fill=\"none\" stroke-width=\"1\" stroke=\"rgb(" + std::to_string(c.r) + "," +
               std::to_string(c.g) + "," + std::to_string(c.b) + ")\" points=\"";
        bool first = true;
        for (cplx z : spec.overlays[r].vertices) {
            const PixelPos p = to_pixel(spec, z);
            if (!std::isfinite(p.x) || !std::isfinite(p.y)) continue;
            if (!first) out += " ";
            out += num(p.x) + "," + num(p.y);
            first = false;
        }
        out += "\"/>\n";
    }
    for (const auto& mark : spec.marks) {
        const PixelPos p = to_pixel(spec, mark.point);
        const Rgb c = mark_color(mark.classification);
        out += "  <circle r=\"3\" cx=\"" + num(p.x) + "\" cy=\"" + num(p.y) + "\" fill=\"rgb(" + std::to_string(c.r) +
               "," + std::to_string(c.g) + "," + std::to_string(c.b) + ")\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

void write_svg(const RenderSpec& spec, const std::string& path) { write_file(path, svg_overlay(spec)); }

}  // namespace dreadlock
