#include "randzeros/paircorr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "randzeros/errors.hpp"
#include "randzeros/theory.hpp"

namespace randzeros {

namespace {

// Polar angle in [0, pi] (geodesic distance to the north pole).
double polar_angle(const SpherePoint& p) {
    return std::atan2(std::hypot(p.x, p.y), p.z);
}

} // namespace

PairHistogram accumulate_pairs(const SphereConfiguration& config, int degree,
                               double max_u, int bins) {
    if (!(max_u > 0.0)) throw DomainError("accumulate_pairs requires max_u > 0");
    if (bins < 4) throw DomainError("accumulate_pairs requires bins >= 4");
    if (degree < 1) throw DomainError("accumulate_pairs requires degree >= 1");

    PairHistogram hist;
    hist.degree = degree;
    hist.n_trials = 1;
    hist.counts.assign(static_cast<std::size_t>(bins), 0);
    hist.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
    const double du = max_u / bins;
    for (int b = 0; b <= bins; ++b) {
        hist.bin_edges[static_cast<std::size_t>(b)] = b * du;
    }

    const std::vector<SpherePoint>& pts = config.points;
    const std::size_t n = pts.size();
    // Scaled distance u = sqrt(N) * r_h, where r_h = round_distance / 2 is the
    // geodesic of the area-pi metric the ensemble is built over (the unit
    // round sphere has 4x its area). This is the scale on which the pair
    // correlation converges to the universal kernel H(u^2/2); measured in
    // unit-sphere round distance the kernel argument would be u^2/8.
    const double scale = 0.5 * std::sqrt(static_cast<double>(degree));
    const double r_max = max_u / scale;

    const auto record_pair = [&](const SpherePoint& a, const SpherePoint& b) {
        const double u = scale * round_distance(a, b);
        if (u > max_u) return;
        int bin = static_cast<int>(u / du);
        if (bin >= bins) bin = bins - 1; // u == max_u lands in the last bin
        hist.counts[static_cast<std::size_t>(bin)] += 2; // ordered pairs
    };

    // Latitude-band grid: the polar angle is 1-Lipschitz along geodesics, so
    // any pair within r_max differs by at most one band of width >= r_max.
    // Scanning a band against itself and its successor sees every unordered
    // pair once.
    const int n_bands = std::max(1, static_cast<int>(std::floor(std::numbers::pi / r_max)));
    if (n_bands < 4) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) record_pair(pts[i], pts[j]);
        return hist;
    }

    const double band_width = std::numbers::pi / n_bands; // >= r_max
    std::vector<std::vector<std::size_t>> bands(static_cast<std::size_t>(n_bands));
    for (std::size_t i = 0; i < n; ++i) {
        int band = static_cast<int>(polar_angle(pts[i]) / band_width);
        band = std::clamp(band, 0, n_bands - 1);
        bands[static_cast<std::size_t>(band)].push_back(i);
    }
    for (int b = 0; b < n_bands; ++b) {
        const auto& cur = bands[static_cast<std::size_t>(b)];
        for (std::size_t ii = 0; ii < cur.size(); ++ii)
            for (std::size_t jj = ii + 1; jj < cur.size(); ++jj)
                record_pair(pts[cur[ii]], pts[cur[jj]]);
        if (b + 1 < n_bands) {
            const auto& next = bands[static_cast<std::size_t>(b) + 1];
            for (std::size_t i : cur)
                for (std::size_t j : next) record_pair(pts[i], pts[j]);
        }
    }
    return hist;
}

void merge_histograms(PairHistogram& into, const PairHistogram& other) {
    if (into.degree != other.degree || into.bin_edges != other.bin_edges) {
        throw DomainError("histogram geometries differ; cannot merge");
    }
    for (std::size_t b = 0; b < into.counts.size(); ++b) {
        into.counts[b] += other.counts[b];
    }
    into.n_trials += other.n_trials;
}

PairCurve normalized_g(const PairHistogram& hist) {
    if (hist.n_trials < 1 || hist.counts.empty()) {
        throw DomainError("empty histogram");
    }
    PairCurve curve;
    curve.bin_width = hist.bin_edges[1] - hist.bin_edges[0];
    curve.points.reserve(hist.counts.size());
    const double n = static_cast<double>(hist.degree);
    const double trials = static_cast<double>(hist.n_trials);
    const double inv_scale = 2.0 / std::sqrt(n); // r = inv_scale * u
    for (std::size_t b = 0; b < hist.counts.size(); ++b) {
        const double u_mid = 0.5 * (hist.bin_edges[b] + hist.bin_edges[b + 1]);
        // Uniform-independent baseline, exact per bin. Two independent
        // uniform points sit at round distance in [r_lo, r_hi] with
        // probability (cos r_lo - cos r_hi)/2, so the expected ordered-pair
        // count is N(N-1) times that. In the scaled variable u = sqrt(N) r/2
        // this is 2 N u du up to O(r^2) and O(1/N); using the exact form
        // keeps a Poisson control flat at 1 across the whole window.
        const double r_lo = inv_scale * hist.bin_edges[b];
        const double r_hi = inv_scale * hist.bin_edges[b + 1];
        const double baseline =
            trials * n * (n - 1.0) * (std::cos(r_lo) - std::cos(r_hi)) / 2.0;
        const double count = static_cast<double>(hist.counts[b]);
        PairCurvePoint p;
        p.u_mid = u_mid;
        p.g = count / baseline;
        // Counts advance in steps of 2 (one per unordered event), so the
        // ordered count has variance 2x Poisson: sigma = 2 sqrt(count/2).
        p.stderr_g = std::sqrt(2.0 * std::max(count, 2.0)) / baseline;
        curve.points.push_back(p);
    }
    return curve;
}

double compare_to_H(const PairCurve& curve) {
    constexpr double lo = 0.2, hi = 3.0;
    if (curve.points.empty() || curve.bin_width <= 0.0) {
        throw DomainError("empty curve");
    }
    const double first_edge = curve.points.front().u_mid - 0.5 * curve.bin_width;
    const double last_edge = curve.points.back().u_mid + 0.5 * curve.bin_width;
    if (first_edge > lo + 1e-12 || last_edge < hi - 1e-12) {
        throw DomainError("curve does not cover the comparison window [0.2, 3]");
    }
    double sum = 0.0, weight = 0.0;
    for (const PairCurvePoint& p : curve.points) {
        if (p.u_mid < lo || p.u_mid > hi) continue;
        const double h = scaling_H(0.5 * p.u_mid * p.u_mid);
        const double diff = p.g - h;
        sum += diff * diff * curve.bin_width;
        weight += curve.bin_width;
    }
    if (weight <= 0.0) throw DomainError("no bins inside the comparison window");
    return std::sqrt(sum / weight);
}

std::vector<double> nearest_neighbor_round(const SphereConfiguration& config) {
    const std::size_t n = config.points.size();
    if (n < 2) throw DomainError("nearest_neighbor_round requires N >= 2");
    std::vector<double> nn(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double r = round_distance(config.points[i], config.points[j]);
            nn[i] = std::min(nn[i], r);
            nn[j] = std::min(nn[j], r);
        }
    }
    return nn;
}

} // namespace randzeros
