#pragma once

#include <string>
#include <vector>

namespace randzeros {

// One named term of a closed-form prediction. `note` carries caveats that
// belong to the term (e.g. a sub-leading sign that the source leaves
// ambiguous) without entering the total.
struct PredictorTerm {
    std::string name;
    double value = 0.0;
    std::string note;
};

// A prediction split into well-defined terms plus flags naming whatever the
// expansion leaves indeterminate (cutoff-dependent pieces, unknown constants,
// little-o remainders). `total` is exactly the sum of `terms`, in order.
struct PredictorResult {
    double total = 0.0;
    std::vector<PredictorTerm> terms;
    std::vector<std::string> unresolved;
};

// Universal pair-correlation kernel of random zeros at the 1/sqrt(N) scale:
//   H(t) = ((sinh^2 t + t^2) cosh t - 2 t sinh t) / sinh^3 t
// with H(t) = t - (2/9) t^3 + O(t^5) near 0 and H -> 1 at infinity.
// A series branch below t = 1e-2 avoids the 0/0 at the origin.
double scaling_H(double t);

// 2 * integral_0^upper (H(r^2/2) - 1) r dr by adaptive quadrature.
// Converges to -1 as upper grows.
double h_tail_integral(double upper);

// Expectation of the pair kernel for two independent uniform sphere points:
//   s in (0,2):  E [z,w]^{-s} = 2^{1-s} / (2-s)
//   s = 0:       E -ln [z,w]  = 1/2 - ln 2      (logarithmic variant)
// Diverges at s >= 2.
double mean_field(double s);

// Expected Green's energy: leading term -(1/4 pi) N ln N, remainder O(N).
PredictorResult predict_green_energy(long long n);

// Expected Riesz s-energy, 0 < s < 4, with the three regimes s < 2, s = 2,
// 2 < s < 4 handled per branch. All logarithms natural.
PredictorResult predict_s_energy(long long n, double s);

// Expected logarithmic energy, all five printed terms.
PredictorResult predict_log_energy(long long n);

// Minimal-energy reference formulas, converted to the ordered-pair
// convention used throughout (twice the i < j sums of the sources).
enum class MinReference {
    green_elkies,    // -(1/4 pi) N ln N - (11/6 pi) N  (lower-bound form)
    riesz2_ks,       // (1/4) N^2 ln N
    riesz_s_ks_bounds, // C1 N^{1+s/2} <= E <= C2 N^{1+s/2}, constants unknown
    log_bbp          // 2 [ -(ln2/2 - 1/4) N^2 - (N/4) ln N ]
};

PredictorResult minimum_reference(long long n, MinReference kind, double s = 0.0);

} // namespace randzeros
