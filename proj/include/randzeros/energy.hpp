#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "randzeros/sphere.hpp"

namespace randzeros {

// Pairwise energies of one configuration. All sums run over ordered pairs
// i != j (twice the i < j value). When `degenerate` is set the energy fields
// are absent and only min_pair_chordal is meaningful.
struct EnergyReport {
    int n_points = 0;
    std::optional<double> green_energy;
    std::optional<double> log_energy;
    std::vector<std::pair<double, double>> s_energies; // (s, energy), input order
    double min_pair_chordal = 0.0;
    bool degenerate = false;
};

// Riesz s-energy  sum_{i!=j} [z_i, z_j]^{-s},  0 < s < 4.
double s_energy(const SphereConfiguration& config, double s, unsigned workers = 1);

// Logarithmic energy  sum_{i!=j} -ln [z_i, z_j].
double log_energy(const SphereConfiguration& config, unsigned workers = 1);

// Green's energy  sum_{i!=j} G(z_i, z_j). Satisfies
//   green = log / (2 pi) + (N^2 - N)(2 ln 2 - 1)/(4 pi)
// up to roundoff; both sides are summed independently.
double green_energy(const SphereConfiguration& config, unsigned workers = 1);

// Minimum chordal distance over pairs; N >= 2.
double min_pair_chordal(const SphereConfiguration& config, unsigned workers = 1);

// One pass over all pairs computing every requested energy at once.
// Deterministic for any worker count: points are sorted into a canonical
// order, pairs are summed in fixed chunks with compensated accumulation, and
// chunk partials are folded sequentially.
EnergyReport compute_report(const SphereConfiguration& config,
                            const std::vector<double>& s_values,
                            bool include_green = true,
                            bool include_log = true,
                            unsigned workers = 1);

} // namespace randzeros
