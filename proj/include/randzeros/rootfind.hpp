#pragma once

#include <complex>
#include <vector>

#include "randzeros/ensemble.hpp"

namespace randzeros {

// A zero of the sample in the extended complex plane. Vanishing leading
// coefficients deflate the degree and produce explicit zeros at infinity.
struct ProjectiveRoot {
    std::complex<double> value{0.0, 0.0};
    bool at_infinity = false;
    double residual = 0.0; // scaled |p(z)|; 0 for infinity roots
};

struct RootSet {
    std::vector<ProjectiveRoot> roots; // exactly `degree` entries with multiplicity
    int degree = 0;
    bool converged = false;
    int iterations = 0;
};

struct RootfindOptions {
    double tolerance = 1e-13;          // scaled-residual convergence target
    int max_iterations = 200;          // Aberth sweeps
    double deflation_threshold = 1e-13; // |leading| / max|coeff| below this deflates
};

// Scaled residual of p at z:
//   |z| <= 1:  |p(z)| / sum_j |a_j|
//   |z| >  1:  |q(1/z)| / sum_k |a_{n-k}| |1/z|^k,   q = reversed polynomial
// Both branches equal |p(z)| / sum_j |a_j| max(1,|z|)^j and stay in [0, 1];
// evaluation never leaves the unit disk, so no overflow for any degree.
double residual(const PolynomialSample& poly, std::complex<double> z);

// All `degree` zeros by Aberth-Ehrlich simultaneous iteration. Iterates with
// |z| > 1 are driven through the reversed polynomial. Non-convergence within
// the sweep cap returns converged = false rather than throwing.
RootSet find_roots(const PolynomialSample& poly, const RootfindOptions& opts = {});

// Independent oracle: eigenvalues of the balanced companion matrix of the
// monic normalization. Dense solve, degree <= 256.
RootSet companion_roots(const PolynomialSample& poly);

// Largest pairwise distance after optimal (min-cost bipartite) matching of
// two root sets of equal degree, measured chordally on the sphere so large
// and infinite roots compare cleanly.
double matched_root_distance(const RootSet& a, const RootSet& b);

} // namespace randzeros
