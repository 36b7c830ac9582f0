#include "randzeros/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "randzeros/errors.hpp"

namespace randzeros {

double log_binomial(long long n, long long k) {
    if (n < 0 || k < 0 || k > n) {
        throw DomainError("log_binomial requires 0 <= k <= n");
    }
    if (k == 0 || k == n) return 0.0;
    // long double lgamma keeps the absolute error of the three-term
    // difference near 1e-12 up to n ~ 1e6, where double lgamma alone would
    // already lose ~1e-8 to cancellation.
    const long double r = std::lgammal(static_cast<long double>(n) + 1.0L)
                        - std::lgammal(static_cast<long double>(k) + 1.0L)
                        - std::lgammal(static_cast<long double>(n - k) + 1.0L);
    return static_cast<double>(r);
}

PolynomialSample sample_su2(int degree, const RandomSeed& seed) {
    if (degree < 1) throw DomainError("sample_su2 requires degree >= 1");

    Xoshiro256pp rng = make_stream(seed);
    const int n_coeffs = degree + 1;

    std::vector<std::complex<double>> gaussians(n_coeffs);
    std::vector<double> log_mag(n_coeffs); // ln |c_j sqrt(C(N,j))|
    for (int j = 0; j < n_coeffs; ++j) {
        const std::complex<double> c = rng.next_complex_gaussian();
        gaussians[j] = c;
        const double mag = std::abs(c);
        log_mag[j] = 0.5 * log_binomial(degree, j)
                   + (mag > 0.0 ? std::log(mag)
                                : -std::numeric_limits<double>::infinity());
    }

    const double log_scale = *std::max_element(log_mag.begin(), log_mag.end());

    PolynomialSample sample;
    sample.degree = degree;
    sample.seed = seed;
    sample.log_scale = log_scale;
    sample.coefficients.resize(n_coeffs);
    for (int j = 0; j < n_coeffs; ++j) {
        const double factor = std::exp(0.5 * log_binomial(degree, j) - log_scale);
        sample.coefficients[j] = gaussians[j] * factor;
    }
    return sample;
}

} // namespace randzeros
