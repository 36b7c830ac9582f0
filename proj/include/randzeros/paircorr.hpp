#pragma once

#include <cstdint>
#include <vector>

#include "randzeros/sphere.hpp"

namespace randzeros {

// Ordered-pair counts over the scaled distance u = sqrt(N) * r_h, where
// r_h = round_distance / 2 is the geodesic of the area-pi metric underlying
// the ensemble (the scale on which g converges to H(u^2/2)). Bins are uniform
// on [0, max_u]; histograms with identical geometry merge by adding counts,
// so trials accumulate in any order.
struct PairHistogram {
    std::vector<double> bin_edges;    // size bins + 1, starts at 0, strictly increasing
    std::vector<std::uint64_t> counts; // size bins
    std::uint64_t n_trials = 0;
    int degree = 0;
};

struct PairCurvePoint {
    double u_mid = 0.0;
    double g = 0.0;
    double stderr_g = 0.0;
};

struct PairCurve {
    std::vector<PairCurvePoint> points;
    double bin_width = 0.0;
};

// Counts every ordered pair with u <= max_u into its bin (n_trials = 1).
// Uses a latitude-band grid so the scan cost scales with the window size
// rather than N^2; equivalent to the brute-force double loop.
PairHistogram accumulate_pairs(const SphereConfiguration& config, int degree,
                               double max_u, int bins);

// Adds `other` into `into`; geometry (degree, edges) must match.
void merge_histograms(PairHistogram& into, const PairHistogram& other);

// Empirical pair-correlation curve: per-bin counts over the exact
// uniform-independent expectation
//   baseline = n_trials * N(N-1) * (cos r_lo - cos r_hi) / 2,  r = 2u/sqrt(N),
// which is 2 N u du at the 1/sqrt(N) scale. A Poisson control flattens to 1;
// random-zero curves converge to H(u^2/2). stderr_g is the Poisson error on
// unordered pair events (sigma = sqrt(2 count), counts advance by 2) over the
// same baseline.
PairCurve normalized_g(const PairHistogram& hist);

// Weighted L2 distance between g and the universal kernel on u in [0.2, 3]:
//   sqrt( sum_bins (g(u) - H(u^2/2))^2 du / W ),  W = covered width (2.8 for
// the default 40-bin window). Throws if the curve does not span [0.2, 3].
double compare_to_H(const PairCurve& curve);

// Per-point nearest-neighbor geodesic distances (brute force; N >= 2).
std::vector<double> nearest_neighbor_round(const SphereConfiguration& config);

} // namespace randzeros
