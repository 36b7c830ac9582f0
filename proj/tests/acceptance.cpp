// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code 0 iff all pass.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "randzeros/energy.hpp"
#include "randzeros/errors.hpp"
#include "randzeros/ensemble.hpp"
#include "randzeros/experiment.hpp"
#include "randzeros/minimizer.hpp"
#include "randzeros/paircorr.hpp"
#include "randzeros/parallel.hpp"
#include "randzeros/rootfind.hpp"
#include "randzeros/sphere.hpp"
#include "randzeros/theory.hpp"

using namespace randzeros;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;

struct Checker {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

unsigned workers() {
    if (const char* env = std::getenv("RANDZEROS_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return resolve_workers(0);
}

std::string format_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// ---- shared Monte Carlo state (criteria 5-8, 12) ---------------------------

struct SweepData {
    ExperimentResult result;
    double mean(int degree, const std::string& kind) const {
        for (const KindSummary& ks : result.summary.kinds) {
            if (ks.degree == degree && ks.kind == kind) return ks.mean;
        }
        throw DomainError("missing summary kind");
    }
    double stderr_of(int degree, const std::string& kind) const {
        for (const KindSummary& ks : result.summary.kinds) {
            if (ks.degree == degree && ks.kind == kind) return ks.standard_error;
        }
        throw DomainError("missing summary kind");
    }
};

SweepData run_shared_sweep() {
    ExperimentConfig config;
    config.degrees = {100, 200, 400};
    config.trials = 200;
    config.root_seed = 20250810;
    config.s_values = {1.0, 2.0};
    config.include_green = true;
    config.include_log = true;
    config.output_dir = "";
    config.worker_count = workers();
    return {run_trials(config, false)};
}

struct PaircorrData {
    PairCurve su2_curve;
    PairCurve poisson_curve;
    std::vector<double> scaled_nn; // sqrt(N) * r_h over all points and trials
};

PaircorrData run_paircorr_experiment() {
    const int degree = 500, trials = 200, bins = 40;
    const double max_u = 4.0;
    const std::uint64_t root = 77001;

    PaircorrData data;
    std::vector<PairHistogram> hists(trials);
    std::vector<std::vector<double>> nn(trials);
    parallel_chunks(trials, workers(), [&](std::size_t t) {
        const PolynomialSample poly =
            sample_su2(degree, RandomSeed{root, static_cast<std::uint64_t>(t)});
        const RootSet roots = find_roots(poly);
        const SphereConfiguration config = configuration_from_roots(roots);
        hists[t] = accumulate_pairs(config, degree, max_u, bins);
        nn[t] = nearest_neighbor_round(config);
    });
    PairHistogram merged = hists[0];
    for (int t = 1; t < trials; ++t) merge_histograms(merged, hists[t]);
    data.su2_curve = normalized_g(merged);
    const double scale = 0.5 * std::sqrt(static_cast<double>(degree));
    for (const auto& per_trial : nn) {
        for (double r : per_trial) data.scaled_nn.push_back(scale * r);
    }

    std::vector<PairHistogram> control(trials);
    parallel_chunks(trials, workers(), [&](std::size_t t) {
        Xoshiro256pp rng = make_stream({root + 1, static_cast<std::uint64_t>(t)});
        SphereConfiguration config;
        config.points.reserve(degree);
        for (int i = 0; i < degree; ++i) config.points.push_back(random_sphere_point(rng));
        control[t] = accumulate_pairs(config, degree, max_u, bins);
    });
    PairHistogram cmerged = control[0];
    for (int t = 1; t < trials; ++t) merge_histograms(cmerged, control[t]);
    data.poisson_curve = normalized_g(cmerged);
    return data;
}

// ---- criteria --------------------------------------------------------------

void criterion_1(Checker& c) {
    // Exact Green/log linkage on 100 random configurations at N = 50.
    Xoshiro256pp rng = make_stream({11011, 0});
    const int n = 50;
    for (int trial = 0; trial < 100; ++trial) {
        SphereConfiguration config;
        for (int i = 0; i < n; ++i) config.points.push_back(random_sphere_point(rng));
        const double green = green_energy(config);
        const double rhs = log_energy(config) / (2.0 * kPi)
            + (double(n) * n - n) * (2.0 * kLn2 - 1.0) / (4.0 * kPi);
        c.require(std::abs(green - rhs) <= 1e-9 * std::max(1.0, std::abs(green)),
                  "linkage residual " + format_num(std::abs(green - rhs)));
    }
}

void criterion_2(Checker& c) {
    const double v = h_tail_integral(8.0);
    c.require(std::abs(v + 1.0) <= 1e-6, "tail(8) = " + format_num(v));
}

void criterion_3(Checker& c) {
    c.require(mean_field(1.0) == 1.0, "mean_field(1) != 1");
    c.require(std::abs(mean_field(0.0) - (0.5 - kLn2)) <= 1e-15, "mean_field(0)");
    const int n = 1000000;
    Xoshiro256pp rng = make_stream({30303, 0});
    double s1 = 0, s1sq = 0, s0 = 0, s0sq = 0;
    for (int i = 0; i < n; ++i) {
        const SpherePoint a = random_sphere_point(rng);
        const SpherePoint b = random_sphere_point(rng);
        const double d = chordal(a, b);
        const double v1 = 1.0 / d, v0 = -std::log(d);
        s1 += v1;
        s1sq += v1 * v1;
        s0 += v0;
        s0sq += v0 * v0;
    }
    const double m1 = s1 / n, m0 = s0 / n;
    const double se1 = std::sqrt((s1sq / n - m1 * m1) / n);
    const double se0 = std::sqrt((s0sq / n - m0 * m0) / n);
    c.require(std::abs(m1 - 1.0) <= 4.0 * se1,
              "MC mean " + format_num(m1) + " vs 1 (se " + format_num(se1) + ")");
    c.require(std::abs(m0 - (0.5 - kLn2)) <= 4.0 * se0,
              "MC mean " + format_num(m0) + " vs " + format_num(0.5 - kLn2));
}

void criterion_4(Checker& c) {
    const int degree = 64;
    double worst_match = 0.0, worst_vieta = 0.0;
    for (std::uint64_t t = 0; t < 100; ++t) {
        const PolynomialSample p = sample_su2(degree, RandomSeed{44004, t});
        const RootSet fast = find_roots(p);
        c.require(fast.converged, "Aberth non-convergence at trial " + std::to_string(t));
        const RootSet oracle = companion_roots(p);
        worst_match = std::max(worst_match, matched_root_distance(fast, oracle));

        // Vieta on the monic normalization, reconstructed in long double.
        std::vector<std::complex<long double>> recon{1.0L};
        for (const ProjectiveRoot& r : fast.roots) {
            if (r.at_infinity) continue;
            const std::complex<long double> z(r.value.real(), r.value.imag());
            recon.push_back(0.0L);
            for (std::size_t j = recon.size() - 1; j > 0; --j) {
                recon[j] = recon[j - 1] - z * recon[j];
            }
            recon[0] = -z * recon[0];
        }
        const std::complex<double> lead = p.coefficients.back();
        double max_c = 0.0;
        for (const auto& a : p.coefficients) max_c = std::max(max_c, std::abs(a / lead));
        for (std::size_t j = 0; j < p.coefficients.size(); ++j) {
            const std::complex<double> monic = p.coefficients[j] / lead;
            const std::complex<double> got(static_cast<double>(recon[j].real()),
                                           static_cast<double>(recon[j].imag()));
            worst_vieta = std::max(worst_vieta, std::abs(got - monic) / max_c);
        }
    }
    c.require(worst_match <= 1e-8, "matched distance " + format_num(worst_match));
    c.require(worst_vieta <= 1e-8, "Vieta residual " + format_num(worst_vieta));
}

void criterion_5(Checker& c, const SweepData& sweep) {
    const double target = -(kLn2 - 0.5);
    const double gap400 = std::abs(sweep.mean(400, "log") / (400.0 * 400.0) - target);
    const double gap100 = std::abs(sweep.mean(100, "log") / (100.0 * 100.0) - target);
    c.require(gap400 <= 0.10, "gap at N=400 is " + format_num(gap400));
    c.require(gap400 < gap100, "gap grew: " + format_num(gap100) + " -> "
                                   + format_num(gap400));
}

void criterion_6(Checker& c, const SweepData& sweep) {
    for (const SweepFit& fit : sweep.result.summary.fits) {
        if (fit.kind != "green") continue;
        const double target = -1.0 / (4.0 * kPi);
        c.require(std::abs(fit.a - target) <= 0.25 * std::abs(target),
                  "fitted N log N coefficient " + format_num(fit.a));
        return;
    }
    c.require(false, "no green fit present");
}

void criterion_7(Checker& c, const SweepData& sweep) {
    const double ratio = sweep.mean(400, "s=1") / (400.0 * 400.0);
    c.require(std::abs(ratio - 1.0) <= 0.05, "mean E_1 / N^2 = " + format_num(ratio));
}

void criterion_8(Checker& c, const SweepData& sweep) {
    double prev_gap = 1e300;
    for (int degree : {100, 200, 400}) {
        const double n = degree;
        const double ratio = sweep.mean(degree, "s=2") / (n * n * std::log(n));
        c.require(ratio >= 0.15 && ratio <= 0.45,
                  "E_2/(N^2 ln N) = " + format_num(ratio) + " at N=" + std::to_string(degree));
        const double gap = std::abs(ratio - 0.25);
        c.require(gap < prev_gap, "ratio not trending toward 1/4 at N="
                                      + std::to_string(degree));
        prev_gap = gap;
    }
}

void criterion_9(Checker& c, const PaircorrData& data) {
    const double l2 = compare_to_H(data.su2_curve);
    c.require(l2 < 0.05, "weighted L2 distance " + format_num(l2));
    for (const PairCurvePoint& p : data.poisson_curve.points) {
        c.require(std::abs(p.g - 1.0) <= 3.0 * p.stderr_g,
                  "Poisson control bin at u=" + format_num(p.u_mid) + " has g="
                      + format_num(p.g));
    }
    // Boundedness of the empirical correlation at this scale.
    for (const PairCurvePoint& p : data.su2_curve.points) {
        c.require(p.g >= 0.0 && p.g <= 1.6,
                  "g out of [0, 1.6] at u=" + format_num(p.u_mid));
    }
}

void criterion_10(Checker& c, const PaircorrData& data) {
    std::vector<double> nn = data.scaled_nn;
    std::sort(nn.begin(), nn.end());
    const double median = nn[nn.size() / 2];
    c.require(median >= 0.5 && median <= 2.0,
              "median scaled nn distance " + format_num(median));
}

void criterion_11(Checker& c) {
    MinimizeOptions opts;
    opts.energy_kind = EnergyKind::log;
    opts.restarts = 3;
    opts.max_iterations = 50000;
    opts.gradient_tolerance = 1e-7;
    opts.seed = {66011, 0};
    const MinimizeOutcome two = best_of(2, opts, workers());
    c.require(std::abs(two.energy - (-2.0 * kLn2)) <= 1e-8,
              "N=2 energy " + format_num(two.energy));

    const MinimizeOutcome three = best_of(3, opts, workers());
    c.require(std::abs(three.energy - (-3.0 * std::log(3.0))) <= 1e-6,
              "N=3 energy " + format_num(three.energy));

    opts.restarts = 20;
    const MinimizeOutcome four = best_of(4, opts, workers());
    c.require(std::abs(four.energy - (-6.0 * std::log(8.0 / 3.0))) <= 1e-6,
              "N=4 energy " + format_num(four.energy));

    // Icosahedron energy from exact coordinates.
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    const double norm = std::sqrt(1.0 + phi * phi);
    SphereConfiguration ico;
    for (const double s1 : {1.0, -1.0}) {
        for (const double s2 : {1.0, -1.0}) {
            ico.points.push_back({0.0, s1 / norm, s2 * phi / norm});
            ico.points.push_back({s1 / norm, s2 * phi / norm, 0.0});
            ico.points.push_back({s2 * phi / norm, 0.0, s1 / norm});
        }
    }
    const double ico_energy = log_energy(ico);
    opts.restarts = 12;
    const MinimizeOutcome twelve = best_of(12, opts, workers());
    c.require(std::abs(twelve.energy - ico_energy) <= 1e-6,
              "N=12 energy " + format_num(twelve.energy) + " vs icosahedron "
                  + format_num(ico_energy));

    // Analytic tangent gradients match central differences at N = 8.
    Xoshiro256pp rng = make_stream({66012, 0});
    SphereConfiguration base;
    for (int i = 0; i < 8; ++i) base.points.push_back(random_sphere_point(rng));
    struct Case { EnergyKind kind; double s; };
    for (const Case& kase : {Case{EnergyKind::log, 2.0}, Case{EnergyKind::riesz, 1.5},
                             Case{EnergyKind::green, 2.0}}) {
        const auto grads = tangent_gradients(base, kase.kind, kase.s);
        const auto energy_at = [&](const SphereConfiguration& cfg) {
            switch (kase.kind) {
                case EnergyKind::log: return log_energy(cfg);
                case EnergyKind::riesz: return s_energy(cfg, kase.s);
                default: return green_energy(cfg);
            }
        };
        for (std::size_t i = 0; i < base.points.size(); ++i) {
            SpherePoint dir = random_sphere_point(rng);
            const SpherePoint& x = base.points[i];
            const double proj = dir.x * x.x + dir.y * x.y + dir.z * x.z;
            dir = {dir.x - proj * x.x, dir.y - proj * x.y, dir.z - proj * x.z};
            const double dn = std::sqrt(dir.x * dir.x + dir.y * dir.y + dir.z * dir.z);
            dir = {dir.x / dn, dir.y / dn, dir.z / dn};
            const double h = 1e-6;
            const auto moved = [&](double step) {
                SphereConfiguration cfg = base;
                SpherePoint m{x.x + step * dir.x, x.y + step * dir.y,
                              x.z + step * dir.z};
                const double mn = std::sqrt(m.x * m.x + m.y * m.y + m.z * m.z);
                cfg.points[i] = {m.x / mn, m.y / mn, m.z / mn};
                return cfg;
            };
            const double numeric = (energy_at(moved(h)) - energy_at(moved(-h))) / (2 * h);
            const double analytic =
                grads[i].x * dir.x + grads[i].y * dir.y + grads[i].z * dir.z;
            c.require(std::abs(numeric - analytic)
                          <= 1e-5 * std::max(1.0, std::abs(analytic)),
                      "gradient mismatch " + format_num(numeric) + " vs "
                          + format_num(analytic));
        }
    }
}

void criterion_12(Checker& c, const SweepData& sweep) {
    MinimizeOptions opts;
    opts.energy_kind = EnergyKind::log;
    opts.restarts = 4;
    opts.max_iterations = 4000;
    opts.gradient_tolerance = 1e-4;
    opts.seed = {66013, 0};
    const MinimizeOutcome best = best_of(100, opts, workers());
    const double mean = sweep.mean(100, "log");
    const double se = sweep.stderr_of(100, "log");
    c.require(best.energy <= mean - 3.0 * se,
              "minimum " + format_num(best.energy) + " vs mean-3se "
                  + format_num(mean - 3.0 * se));

    const auto threshold = [](int n) {
        return minimum_reference(n, MinReference::green_elkies).total
             + 0.5 * n * std::log(double(n));
    };
    const double t100 =
        tail_fraction(sweep.result.table, 100, "green", threshold(100));
    const double t200 =
        tail_fraction(sweep.result.table, 200, "green", threshold(200));
    c.require(t100 < 1.0, "tail fraction at N=100 is 1");
    c.require(t200 <= t100, "tail fraction increased: " + format_num(t100) + " -> "
                                + format_num(t200));
}

void criterion_13(Checker& c) {
    // CLI surface: 50 zeros in the CSV plus a byte-stable SVG scatter.
#ifdef RANDZEROS_CLI_PATH
    const fs::path dir = fs::temp_directory_path() / "randzeros_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string cli = RANDZEROS_CLI_PATH;
    const auto run_sample = [&](const std::string& out) {
        const std::string cmd = cli + " sample --degree 50 --seed 909 --out "
            + (dir / out).string() + " > /dev/null 2>&1";
        return std::system(cmd.c_str()) == 0;
    };
    c.require(run_sample("a") && run_sample("b"), "sample subcommand failed");

    std::ifstream csv(dir / "a" / "zeros.csv");
    c.require(csv.good(), "zeros.csv missing");
    int rows = -1; // header
    std::string line;
    while (std::getline(csv, line)) {
        if (!line.empty()) ++rows;
    }
    c.require(rows == 50, "zeros.csv has " + std::to_string(rows) + " rows");

    const auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string svg_a = slurp(dir / "a" / "zeros.svg");
    c.require(!svg_a.empty(), "zeros.svg missing");
    c.require(svg_a == slurp(dir / "b" / "zeros.svg"), "SVG bytes differ across runs");
    fs::remove_all(dir);
#else
    c.require(false, "CLI path not configured");
#endif

    // Equidistribution: degree-1 spherical-harmonic moments of 1000 aggregated
    // degree-50 trials vanish within four standard errors (computed over the
    // per-trial means, which are independent).
    const int trials = 1000, degree = 50;
    std::vector<std::array<double, 3>> means(trials);
    std::vector<int> failed(trials, 0);
    parallel_chunks(trials, workers(), [&](std::size_t t) {
        const PolynomialSample poly =
            sample_su2(degree, RandomSeed{130013, static_cast<std::uint64_t>(t)});
        const RootSet roots = find_roots(poly);
        if (!roots.converged) {
            failed[t] = 1;
            return;
        }
        const SphereConfiguration config = configuration_from_roots(roots);
        double sx = 0, sy = 0, sz = 0;
        for (const SpherePoint& p : config.points) {
            sx += p.x;
            sy += p.y;
            sz += p.z;
        }
        means[t] = {sx / degree, sy / degree, sz / degree};
    });
    for (int t = 0; t < trials; ++t) {
        c.require(failed[t] == 0, "root finding failed in equidistribution run");
    }
    for (int axis = 0; axis < 3; ++axis) {
        double sum = 0, sumsq = 0;
        for (const auto& m : means) {
            sum += m[static_cast<std::size_t>(axis)];
            sumsq += m[static_cast<std::size_t>(axis)] * m[static_cast<std::size_t>(axis)];
        }
        const double mean = sum / trials;
        const double se = std::sqrt((sumsq / trials - mean * mean) / trials);
        c.require(std::abs(mean) <= 4.0 * se,
                  "first-harmonic moment axis " + std::to_string(axis) + " = "
                      + format_num(mean) + " (se " + format_num(se) + ")");
    }
}

} // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        std::function<void(Checker&)> run;
    };

    // Criteria 5-8 and 12 share one Monte Carlo sweep; 9 and 10 share one
    // pair-correlation experiment. Both are computed lazily.
    std::unique_ptr<SweepData> sweep;
    std::unique_ptr<PaircorrData> pairdata;
    const auto need_sweep = [&]() -> const SweepData& {
        if (!sweep) sweep = std::make_unique<SweepData>(run_shared_sweep());
        return *sweep;
    };
    const auto need_pairdata = [&]() -> const PaircorrData& {
        if (!pairdata) pairdata = std::make_unique<PaircorrData>(run_paircorr_experiment());
        return *pairdata;
    };

    const std::vector<Entry> entries = {
        {1, "Green/log linkage identity (N=50, 100 configs, 1e-9 relative)",
         [](Checker& c) { criterion_1(c); }},
        {2, "h_tail_integral(8) = -1 within 1e-6", [](Checker& c) { criterion_2(c); }},
        {3, "mean-field constants vs closed form and Monte Carlo (4 se)",
         [](Checker& c) { criterion_3(c); }},
        {4, "Aberth vs companion roots at N=64 (1e-8) and Vieta (1e-8)",
         [](Checker& c) { criterion_4(c); }},
        {5, "log-energy leading order at N=400 (band 0.10, shrinking gap)",
         [&](Checker& c) { criterion_5(c, need_sweep()); }},
        {6, "green-energy N ln N coefficient within 25% of -1/(4 pi)",
         [&](Checker& c) { criterion_6(c, need_sweep()); }},
        {7, "Riesz s=1 mean-field ratio within 5% at N=400",
         [&](Checker& c) { criterion_7(c, need_sweep()); }},
        {8, "Riesz s=2 ratio in [0.15,0.45] trending to 1/4",
         [&](Checker& c) { criterion_8(c, need_sweep()); }},
        {9, "pair correlation matches H (L2 < 0.05); Poisson control flat",
         [&](Checker& c) { criterion_9(c, need_pairdata()); }},
        {10, "median scaled nearest-neighbor distance in [0.5, 2.0]",
         [&](Checker& c) { criterion_10(c, need_pairdata()); }},
        {11, "minimizer reference configurations and gradient check",
         [](Checker& c) { criterion_11(c); }},
        {12, "minimum below average - 3 se; Elkies tail fraction shrinks",
         [&](Checker& c) { criterion_12(c, need_sweep()); }},
        {13, "degree-50 sample emission and zero equidistribution",
         [](Checker& c) { criterion_13(c); }},
    };

    int failures = 0;
    for (const Entry& entry : entries) {
        Checker checker;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            entry.run(checker);
        } catch (const std::exception& e) {
            checker.ok = false;
            checker.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0).count();
        if (checker.ok) {
            std::printf("[PASS] criterion %2d: %s (%.1fs)\n", entry.id, entry.name, secs);
        } else {
            ++failures;
            std::printf("[FAIL] criterion %2d: %s — %s (%.1fs)\n", entry.id, entry.name,
                        checker.detail.c_str(), secs);
        }
        std::fflush(stdout);
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
