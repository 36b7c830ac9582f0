#pragma once

#include <string>

#include "randzeros/energy.hpp"
#include "randzeros/rng.hpp"
#include "randzeros/sphere.hpp"

namespace randzeros {

enum class EnergyKind { log, riesz, green };

struct MinimizeOptions {
    EnergyKind energy_kind = EnergyKind::log;
    double s = 2.0;                    // Riesz exponent, used when energy_kind == riesz
    int restarts = 1;
    int max_iterations = 5000;
    // Max tangent-gradient norm over points. Backtracking descent stalls once
    // energy differences reach the floating-point floor eps*|E|, which leaves
    // the gradient around sqrt(eps |E| curvature); tolerances much below 1e-7
    // are not reachable in double precision for N beyond a handful.
    double gradient_tolerance = 1e-6;
    std::string step_rule = "backtracking-halving"; // the only supported rule
    RandomSeed seed;
};

struct MinimizeOutcome {
    SphereConfiguration configuration;
    double energy = 0.0;               // energy-module value on `configuration`
    bool converged = false;
    int restart_index_of_best = 0;
    int degenerate_restarts = 0;       // runs re-initialized after a collision
    int iterations = 0;
};

// Tangent-projected gradient of the ordered-pair energy at each point;
// the descent direction, exposed for finite-difference verification.
std::vector<SpherePoint> tangent_gradients(const SphereConfiguration& config,
                                           EnergyKind kind, double s = 2.0);

// Projected-gradient descent on (S^2)^N: Euclidean pairwise gradient,
// projected to each tangent plane, retraction by renormalization, step by
// backtracking halving from an adaptive initial step. Energy never increases
// along accepted steps. A degenerate configuration restarts the run from a
// fresh seeded initialization (counted in degenerate_restarts).
MinimizeOutcome riemannian_descent(const SphereConfiguration& initial,
                                   const MinimizeOptions& opts);

// Runs opts.restarts independent descents from uniform random initial
// configurations (restart r draws from stream_index seed.stream_index + r)
// and returns the lowest-energy converged outcome; ties break toward the
// lower restart index. Throws OptimizationFailureError if nothing converges.
MinimizeOutcome best_of(int n_points, const MinimizeOptions& opts, unsigned workers = 0);

} // namespace randzeros
