#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "randzeros/rng.hpp"

namespace randzeros {

// One draw from the Gaussian ensemble p(z) = sum_j c_j sqrt(C(N,j)) z^j with
// i.i.d. standard complex Gaussian c_j.
//
// Storage is exponent-safe: coefficients[j] = c_j * exp(lnC(N,j)/2 - log_scale)
// with log_scale chosen so the largest stored modulus is exactly 1. The true
// coefficient is coefficients[j] * exp(log_scale); root sets are invariant
// under that global factor.
struct PolynomialSample {
    int degree = 0;
    std::vector<std::complex<double>> coefficients; // size degree + 1, index = power of z
    RandomSeed seed;
    double log_scale = 0.0;
};

// ln C(n, k). Evaluated in extended precision through lgamma so the absolute
// error stays at the 1e-12 scale even for n near 1e6.
double log_binomial(long long n, long long k);

// Draws the degree-N sample determined by (seed.root_seed, seed.stream_index).
// Pure function of its arguments; safe to call concurrently.
PolynomialSample sample_su2(int degree, const RandomSeed& seed);

} // namespace randzeros
