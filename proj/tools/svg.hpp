#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "randzeros/sphere.hpp"

namespace randzeros::svgplot {

// Minimal hand-rolled SVG scatter: two square panels, the affine plane on the
// left (stereographic coordinates, window |Re|,|Im| <= plane_window) and an
// orthographic sphere view from +z on the right. Fixed-precision formatting
// keeps output bytes stable for identical inputs.
inline std::string zero_scatter(const std::vector<std::complex<double>>& zeros,
                                const std::vector<SpherePoint>& points,
                                double plane_window = 3.0) {
    const double panel = 360.0, margin = 20.0, gap = 40.0;
    const double width = 2 * panel + 2 * margin + gap;
    const double height = panel + 2 * margin;
    const double radius = 2.5;

    std::string out;
    out.reserve(4096 + 128 * (zeros.size() + points.size()));
    char buf[256];

    const auto emit = [&](const char* fmt, double a, double b) {
        std::snprintf(buf, sizeof(buf), fmt, a, b);
        out += buf;
    };

    std::snprintf(buf, sizeof(buf),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                  "viewBox=\"0 0 %.0f %.0f\">\n",
                  width, height, width, height);
    out += buf;
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Left panel: affine plane with unit circle for orientation.
    const double lx = margin, ly = margin;
    std::snprintf(buf, sizeof(buf),
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.0f\" height=\"%.0f\" "
                  "fill=\"none\" stroke=\"#888\"/>\n", lx, ly, panel, panel);
    out += buf;
    const double plane_scale = panel / (2.0 * plane_window);
    std::snprintf(buf, sizeof(buf),
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"none\" "
                  "stroke=\"#ccc\"/>\n",
                  lx + panel / 2, ly + panel / 2, plane_scale);
    out += buf;
    for (const auto& z : zeros) {
        const double re = z.real(), im = z.imag();
        if (!(std::abs(re) <= plane_window && std::abs(im) <= plane_window)) continue;
        emit("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.5\" fill=\"#1551a0\"/>\n",
             lx + panel / 2 + re * plane_scale, ly + panel / 2 - im * plane_scale);
    }

    // Right panel: orthographic view of the sphere from +z; the far
    // hemisphere is drawn hollow.
    const double rx = margin + panel + gap, ry = margin;
    std::snprintf(buf, sizeof(buf),
                  "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"%.1f\" fill=\"none\" "
                  "stroke=\"#888\"/>\n",
                  rx + panel / 2, ry + panel / 2, panel / 2);
    out += buf;
    const double sphere_scale = panel / 2.0;
    for (const SpherePoint& p : points) {
        const double cx = rx + panel / 2 + p.x * sphere_scale;
        const double cy = ry + panel / 2 - p.y * sphere_scale;
        if (p.z >= 0.0) {
            std::snprintf(buf, sizeof(buf),
                          "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.1f\" fill=\"#1551a0\"/>\n",
                          cx, cy, radius);
        } else {
            std::snprintf(buf, sizeof(buf),
                          "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.1f\" fill=\"none\" "
                          "stroke=\"#1551a0\"/>\n",
                          cx, cy, radius);
        }
        out += buf;
    }
    out += "</svg>\n";
    return out;
}

} // namespace randzeros::svgplot
