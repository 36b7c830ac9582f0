#include "randzeros/minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "randzeros/errors.hpp"
#include "randzeros/parallel.hpp"

namespace randzeros {

namespace {

constexpr double kPi = std::numbers::pi;

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double f) const { return {x * f, y * f, z * f}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
};

Vec3 from_point(const SpherePoint& p) { return {p.x, p.y, p.z}; }
SpherePoint to_point(const Vec3& v) { return {v.x, v.y, v.z}; }

// Pairwise kernel as a function of squared chordal distance u, and its
// derivative dk/du. Energies are over ordered pairs (factor 2 on i < j).
struct Kernel {
    EnergyKind kind;
    double s;
    double value(double u) const {
        switch (kind) {
            case EnergyKind::log: return -0.5 * std::log(u);
            case EnergyKind::riesz: return std::pow(u, -0.5 * s);
            case EnergyKind::green:
            default:
                return -std::log(0.5 * u) / (4.0 * kPi)
                     + (std::numbers::ln2 - 1.0) / (4.0 * kPi);
        }
    }
    double derivative(double u) const {
        switch (kind) {
            case EnergyKind::log: return -0.5 / u;
            case EnergyKind::riesz: return -0.5 * s * std::pow(u, -0.5 * s - 1.0);
            case EnergyKind::green:
            default: return -1.0 / (4.0 * kPi * u);
        }
    }
};

double raw_energy(const std::vector<Vec3>& pts, const Kernel& kernel) {
    const std::size_t n = pts.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec3 d = pts[i] - pts[j];
            const double u = d.dot(d);
            if (u < kSingularityFloor * kSingularityFloor) {
                return std::numeric_limits<double>::infinity();
            }
            total += kernel.value(u);
        }
    }
    return 2.0 * total;
}

// Tangent-projected gradient; returns the max per-point tangent norm.
double tangent_gradient(const std::vector<Vec3>& pts, const Kernel& kernel,
                        std::vector<Vec3>& grad) {
    const std::size_t n = pts.size();
    grad.assign(n, Vec3{});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec3 d = pts[i] - pts[j];
            const double u = d.dot(d);
            // dE/dx_i = 2 * sum_j k'(u) * 2 (x_i - x_j), over ordered pairs.
            const Vec3 pull = d * (4.0 * kernel.derivative(u));
            grad[i] += pull;
            grad[j] += pull * -1.0;
        }
    }
    double max_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 radial = pts[i] * grad[i].dot(pts[i]);
        grad[i] = grad[i] - radial;
        max_norm = std::max(max_norm, grad[i].norm());
    }
    return max_norm;
}

std::vector<Vec3> retract(const std::vector<Vec3>& pts, const std::vector<Vec3>& dir,
                          double step) {
    std::vector<Vec3> out(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        Vec3 moved = pts[i];
        moved += dir[i] * (-step);
        const double norm = moved.norm();
        out[i] = norm > 0.0 ? moved * (1.0 / norm) : pts[i];
    }
    return out;
}

std::vector<Vec3> random_configuration(std::size_t n, Xoshiro256pp& rng) {
    std::vector<Vec3> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = from_point(random_sphere_point(rng));
    return pts;
}

Kernel kernel_from_options(const MinimizeOptions& opts) {
    if (opts.energy_kind == EnergyKind::riesz && !(opts.s > 0.0 && opts.s < 4.0)) {
        throw DomainError("riesz minimization requires s in (0, 4)");
    }
    if (opts.step_rule != "backtracking-halving") {
        throw DomainError("unknown step rule: " + opts.step_rule);
    }
    return Kernel{opts.energy_kind, opts.s};
}

SphereConfiguration to_configuration(const std::vector<Vec3>& pts) {
    SphereConfiguration config;
    config.points.reserve(pts.size());
    for (const Vec3& v : pts) config.points.push_back(to_point(v));
    return config;
}

double report_energy(const SphereConfiguration& config, const MinimizeOptions& opts) {
    switch (opts.energy_kind) {
        case EnergyKind::log: return log_energy(config);
        case EnergyKind::riesz: return s_energy(config, opts.s);
        case EnergyKind::green:
        default: return green_energy(config);
    }
}

MinimizeOutcome descend(std::vector<Vec3> pts, const MinimizeOptions& opts,
                        Xoshiro256pp& reinit_rng) {
    const Kernel kernel = kernel_from_options(opts);
    const std::size_t n = pts.size();

    MinimizeOutcome outcome;
    double energy = raw_energy(pts, kernel);
    while (!std::isfinite(energy)) {
        // Coincident points in the start configuration; try a fresh one.
        ++outcome.degenerate_restarts;
        if (outcome.degenerate_restarts > 64) {
            throw OptimizationFailureError("could not find a non-degenerate start");
        }
        pts = random_configuration(n, reinit_rng);
        energy = raw_energy(pts, kernel);
    }

    std::vector<Vec3> grad;
    double step = 1.0 / static_cast<double>(n);
    int iter = 0;
    for (; iter < opts.max_iterations; ++iter) {
        const double gnorm = tangent_gradient(pts, kernel, grad);
        if (gnorm <= opts.gradient_tolerance) {
            outcome.converged = true;
            break;
        }
        bool accepted = false;
        for (int halving = 0; halving < 60; ++halving) {
            const std::vector<Vec3> trial = retract(pts, grad, step);
            const double trial_energy = raw_energy(trial, kernel);
            if (trial_energy <= energy) {
                pts = trial;
                energy = trial_energy;
                accepted = true;
                step *= 2.0; // adaptive initial step for the next iteration
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break; // no descent direction at floating-point scale
    }
    if (!outcome.converged && iter < opts.max_iterations) {
        // Stagnated line search; report convergence by the gradient test.
        outcome.converged = tangent_gradient(pts, kernel, grad) <= opts.gradient_tolerance;
    }

    outcome.iterations = iter;
    outcome.configuration = to_configuration(pts);
    outcome.energy = report_energy(outcome.configuration, opts);
    return outcome;
}

} // namespace

std::vector<SpherePoint> tangent_gradients(const SphereConfiguration& config,
                                           EnergyKind kind, double s) {
    std::vector<Vec3> pts;
    pts.reserve(config.points.size());
    for (const SpherePoint& p : config.points) pts.push_back(from_point(p));
    std::vector<Vec3> grad;
    tangent_gradient(pts, Kernel{kind, s}, grad);
    std::vector<SpherePoint> out;
    out.reserve(grad.size());
    for (const Vec3& g : grad) out.push_back(to_point(g));
    return out;
}

MinimizeOutcome riemannian_descent(const SphereConfiguration& initial,
                                   const MinimizeOptions& opts) {
    if (initial.points.size() < 2) {
        throw DomainError("minimization requires N >= 2");
    }
    if (opts.restarts < 1 || !(opts.gradient_tolerance > 0.0)) {
        throw DomainError("invalid minimizer options");
    }
    std::vector<Vec3> pts;
    pts.reserve(initial.points.size());
    for (const SpherePoint& p : initial.points) {
        Vec3 v = from_point(p);
        const double norm = v.norm();
        if (norm <= 0.0) throw DomainError("initial point with zero norm");
        pts.push_back(v * (1.0 / norm));
    }
    Xoshiro256pp reinit = make_stream(opts.seed);
    return descend(std::move(pts), opts, reinit);
}

MinimizeOutcome best_of(int n_points, const MinimizeOptions& opts, unsigned workers) {
    if (n_points < 2) throw DomainError("minimization requires N >= 2");
    if (opts.restarts < 1 || !(opts.gradient_tolerance > 0.0)) {
        throw DomainError("invalid minimizer options");
    }

    std::vector<MinimizeOutcome> outcomes(static_cast<std::size_t>(opts.restarts));
    parallel_chunks(static_cast<std::size_t>(opts.restarts), workers, [&](std::size_t r) {
        RandomSeed restart_seed{opts.seed.root_seed,
                                opts.seed.stream_index + static_cast<std::uint64_t>(r)};
        Xoshiro256pp rng = make_stream(restart_seed);
        std::vector<Vec3> init = random_configuration(static_cast<std::size_t>(n_points), rng);
        outcomes[r] = descend(std::move(init), opts, rng);
        outcomes[r].restart_index_of_best = static_cast<int>(r);
    });

    const MinimizeOutcome* best = nullptr;
    for (const MinimizeOutcome& o : outcomes) {
        if (!o.converged) continue;
        if (best == nullptr || o.energy < best->energy) best = &o;
    }
    if (best == nullptr) {
        throw OptimizationFailureError("no restart converged");
    }
    return *best;
}

} // namespace randzeros
