// Command-line surface: sample zeros, evaluate energies, print predictors,
// run Monte Carlo sweeps, pair-correlation experiments, energy minimization,
// the H-curve, and human-readable reports of saved summaries.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "randzeros/energy.hpp"
#include "randzeros/ensemble.hpp"
#include "randzeros/errors.hpp"
#include "randzeros/experiment.hpp"
#include "randzeros/minimizer.hpp"
#include "randzeros/paircorr.hpp"
#include "randzeros/parallel.hpp"
#include "randzeros/rootfind.hpp"
#include "randzeros/sphere.hpp"
#include "randzeros/theory.hpp"
#include "svg.hpp"

namespace rz = randzeros;
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

unsigned default_workers() {
    if (const char* env = std::getenv("RANDZEROS_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 0; // auto
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw rz::IoError("cannot write " + path.string());
    out << content;
    if (!out) throw rz::IoError("failed while writing " + path.string());
}

rz::SphereConfiguration sampled_configuration(int degree, std::uint64_t root_seed,
                                              std::uint64_t stream,
                                              std::vector<std::complex<double>>* affine) {
    const rz::RandomSeed seed{root_seed, stream};
    const rz::PolynomialSample poly = rz::sample_su2(degree, seed);
    const rz::RootSet roots = rz::find_roots(poly);
    if (!roots.converged) {
        throw rz::OptimizationFailureError("root finding did not converge for this seed");
    }
    if (affine) {
        affine->clear();
        for (const rz::ProjectiveRoot& r : roots.roots) {
            affine->push_back(r.at_infinity
                                  ? std::complex<double>(INFINITY, INFINITY)
                                  : r.value);
        }
    }
    return rz::configuration_from_roots(roots, rz::ConfigurationSource{seed, degree});
}

json predictor_json(const rz::PredictorResult& p) {
    json terms = json::array();
    for (const rz::PredictorTerm& t : p.terms) {
        json jt;
        jt["name"] = t.name;
        jt["value"] = t.value;
        if (!t.note.empty()) jt["note"] = t.note;
        terms.push_back(jt);
    }
    return {{"total", p.total}, {"terms", terms}, {"unresolved", p.unresolved}};
}

int cmd_sample(int degree, std::uint64_t seed, const std::string& out_dir) {
    std::vector<std::complex<double>> affine;
    const rz::SphereConfiguration config =
        sampled_configuration(degree, seed, 0, &affine);

    std::ostringstream csv;
    csv << "index,re,im,x,y,z\n";
    for (std::size_t i = 0; i < config.points.size(); ++i) {
        const auto& p = config.points[i];
        csv << i << ',' << fmt(affine[i].real()) << ',' << fmt(affine[i].imag()) << ','
            << fmt(p.x) << ',' << fmt(p.y) << ',' << fmt(p.z) << '\n';
    }
    write_file(fs::path(out_dir) / "zeros.csv", csv.str());
    write_file(fs::path(out_dir) / "zeros.svg",
               rz::svgplot::zero_scatter(affine, config.points));
    std::cout << "wrote " << (fs::path(out_dir) / "zeros.csv").string() << " and "
              << (fs::path(out_dir) / "zeros.svg").string() << " (" << degree
              << " zeros)\n";
    return 0;
}

rz::SphereConfiguration load_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw rz::IoError("cannot open points file: " + path);
    rz::SphereConfiguration config;
    std::string line;
    bool first = true;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (first && line.find("x") != std::string::npos && line.find(',') != std::string::npos) {
            first = false;
            continue; // header
        }
        first = false;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ',')) {
            try {
                vals.push_back(std::stod(cell));
            } catch (...) {
                throw rz::ParseError(path + " line " + std::to_string(line_no)
                                     + ": expected numeric cell, got '" + cell + "'");
            }
        }
        if (vals.size() < 3) {
            throw rz::ParseError(path + " line " + std::to_string(line_no)
                                 + ": expected x,y,z columns");
        }
        // Last three columns are the unit vector (matches `sample` output).
        const std::size_t k = vals.size() - 3;
        config.points.push_back({vals[k], vals[k + 1], vals[k + 2]});
    }
    if (config.points.empty()) throw rz::ParseError("no points in " + path);
    return config;
}

int cmd_energy(int degree, std::uint64_t seed, const std::string& points_path,
               const std::vector<double>& s_values, unsigned workers) {
    rz::SphereConfiguration config;
    if (!points_path.empty()) {
        config = load_points_csv(points_path);
    } else {
        config = sampled_configuration(degree, seed, 0, nullptr);
    }
    const rz::EnergyReport report =
        rz::compute_report(config, s_values, true, true, rz::resolve_workers(workers));
    json out;
    out["n_points"] = report.n_points;
    out["degenerate"] = report.degenerate;
    out["min_pair_chordal"] = report.min_pair_chordal;
    if (report.green_energy) out["green_energy"] = *report.green_energy;
    if (report.log_energy) out["log_energy"] = *report.log_energy;
    json s_out = json::object();
    for (const auto& [s, e] : report.s_energies) {
        char key[32];
        std::snprintf(key, sizeof(key), "%g", s);
        s_out[key] = e;
    }
    out["s_energies"] = s_out;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_predict(long long n, const std::string& kind, double s,
                const std::string& min_ref) {
    json out;
    if (!min_ref.empty()) {
        rz::MinReference ref;
        if (min_ref == "green_elkies") ref = rz::MinReference::green_elkies;
        else if (min_ref == "riesz2_KS") ref = rz::MinReference::riesz2_ks;
        else if (min_ref == "rieszS_KS_bounds") ref = rz::MinReference::riesz_s_ks_bounds;
        else if (min_ref == "log_BBP") ref = rz::MinReference::log_bbp;
        else throw rz::DomainError("unknown --min-ref kind: " + min_ref);
        out["minimum_reference"] = predictor_json(rz::minimum_reference(n, ref, s));
    } else if (kind == "green") {
        out["predictor"] = predictor_json(rz::predict_green_energy(n));
    } else if (kind == "log") {
        out["predictor"] = predictor_json(rz::predict_log_energy(n));
    } else if (kind == "riesz") {
        out["predictor"] = predictor_json(rz::predict_s_energy(n, s));
    } else {
        throw rz::DomainError("unknown --kind: " + kind);
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_hcurve(double t_max, int samples, const std::string& out_path) {
    if (!(t_max > 0.0)) throw rz::DomainError("hcurve requires t_max > 0");
    if (samples < 2) throw rz::DomainError("hcurve requires samples >= 2");
    std::ostringstream csv;
    csv << "t,H_minus_1\n";
    for (int i = 0; i < samples; ++i) {
        const double t = t_max * i / (samples - 1);
        csv << fmt(t) << ',' << fmt(rz::scaling_H(t) - 1.0) << '\n';
    }
    if (out_path.empty() || out_path == "-") {
        std::cout << csv.str();
    } else {
        write_file(out_path, csv.str());
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

int cmd_paircorr(int degree, int trials, std::uint64_t seed, double max_u, int bins,
                 bool poisson_control, const std::string& out_path, unsigned workers) {
    if (degree < 2) throw rz::DomainError("paircorr requires degree >= 2");
    if (trials < 1) throw rz::DomainError("paircorr requires trials >= 1");

    std::vector<rz::PairHistogram> hists(static_cast<std::size_t>(trials));
    rz::parallel_chunks(static_cast<std::size_t>(trials), rz::resolve_workers(workers),
                        [&](std::size_t t) {
        rz::SphereConfiguration config;
        if (poisson_control) {
            rz::Xoshiro256pp rng = rz::make_stream({seed, static_cast<std::uint64_t>(t)});
            config.points.reserve(static_cast<std::size_t>(degree));
            for (int i = 0; i < degree; ++i) {
                config.points.push_back(rz::random_sphere_point(rng));
            }
        } else {
            config = sampled_configuration(degree, seed, t, nullptr);
        }
        hists[t] = rz::accumulate_pairs(config, degree, max_u, bins);
    });
    rz::PairHistogram merged = hists[0];
    for (std::size_t t = 1; t < hists.size(); ++t) rz::merge_histograms(merged, hists[t]);

    const rz::PairCurve curve = rz::normalized_g(merged);
    std::ostringstream csv;
    csv << "u_mid,g,H,stderr\n";
    for (const rz::PairCurvePoint& p : curve.points) {
        csv << fmt(p.u_mid) << ',' << fmt(p.g) << ','
            << fmt(rz::scaling_H(0.5 * p.u_mid * p.u_mid)) << ',' << fmt(p.stderr_g)
            << '\n';
    }
    if (out_path.empty() || out_path == "-") {
        std::cout << csv.str();
    } else {
        write_file(out_path, csv.str());
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

int cmd_minimize(int n, const std::string& kind, double s, int restarts,
                 int max_iterations, double gtol, std::uint64_t seed,
                 const std::string& out_path, unsigned workers) {
    rz::MinimizeOptions opts;
    if (kind == "log") opts.energy_kind = rz::EnergyKind::log;
    else if (kind == "riesz") opts.energy_kind = rz::EnergyKind::riesz;
    else if (kind == "green") opts.energy_kind = rz::EnergyKind::green;
    else throw rz::DomainError("unknown --kind: " + kind);
    opts.s = s;
    opts.restarts = restarts;
    opts.max_iterations = max_iterations;
    opts.gradient_tolerance = gtol;
    opts.seed = {seed, 0};

    const rz::MinimizeOutcome outcome = rz::best_of(n, opts, rz::resolve_workers(workers));
    if (!out_path.empty()) {
        std::ostringstream csv;
        csv << "x,y,z\n";
        for (const rz::SpherePoint& p : outcome.configuration.points) {
            csv << fmt(p.x) << ',' << fmt(p.y) << ',' << fmt(p.z) << '\n';
        }
        write_file(out_path, csv.str());
    }
    json out;
    out["n_points"] = n;
    out["kind"] = kind;
    out["energy"] = outcome.energy;
    out["converged"] = outcome.converged;
    out["restart_index_of_best"] = outcome.restart_index_of_best;
    out["degenerate_restarts"] = outcome.degenerate_restarts;
    std::cout << out.dump(2) << "\n";
    return 0;
}

rz::ExperimentConfig config_from_cli(const std::string& config_path,
                                     const std::vector<int>& degrees, int trials,
                                     std::uint64_t seed, bool seed_set,
                                     const std::vector<double>& s_values,
                                     const std::string& out_dir, unsigned workers) {
    rz::ExperimentConfig config;
    bool have_file = !config_path.empty();
    if (have_file) config = rz::parse_config_file(config_path);
    // Flags override config-file values.
    if (!degrees.empty()) config.degrees = degrees;
    if (trials > 0) config.trials = trials;
    if (seed_set) config.root_seed = seed;
    if (!s_values.empty()) config.s_values = s_values;
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (workers > 0) config.worker_count = workers;
    if (!have_file && config.output_dir.empty()) config.output_dir = "out";
    config.validate();
    return config;
}

int cmd_sweep(const rz::ExperimentConfig& config) {
    const rz::ExperimentResult result = rz::run_trials(config);
    std::cout << "wrote " << (fs::path(config.output_dir) / "trials.csv").string()
              << " and " << (fs::path(config.output_dir) / "summary.json").string()
              << "\n";
    std::cout << "healthy: " << (result.summary.healthy ? "yes" : "no")
              << "  max discard fraction: " << fmt6(result.summary.max_discard_fraction)
              << "\n";
    for (const rz::SweepFit& fit : result.summary.fits) {
        std::cout << "fit " << fit.kind << ": " << fit.basis[0] << " coeff = "
                  << fmt6(fit.a) << " +- " << fmt6(2.0 * fit.a_stderr) << ", "
                  << fit.basis[1] << " coeff = " << fmt6(fit.b) << " +- "
                  << fmt6(2.0 * fit.b_stderr) << "\n";
    }
    return 0;
}

int cmd_report(const std::vector<std::string>& paths) {
    if (paths.empty()) throw rz::DomainError("report requires at least one summary.json");
    std::ostringstream out;
    for (const std::string& path : paths) {
        std::ifstream in(path);
        if (!in) throw rz::IoError("cannot open " + path);
        json root;
        try {
            in >> root;
        } catch (const std::exception& e) {
            throw rz::ParseError(path + ": " + e.what());
        }
        const auto need = [&](const json& obj, const char* field) -> const json& {
            if (!obj.contains(field)) {
                throw rz::ParseError(path + ": missing field '" + field + "'");
            }
            return obj.at(field);
        };

        out << "== " << path << " (root_seed " << need(root, "root_seed")
            << ", trials " << need(root, "trials_per_degree") << ", healthy "
            << (need(root, "healthy").get<bool>() ? "yes" : "no") << ")\n";
        out << "degree  kind      mean            stderr        predictor       "
               "residual       scaled     flags\n";
        for (const json& item : need(root, "results")) {
            const std::string kind = need(item, "kind").get<std::string>();
            const json& pred = need(item, "predictor");
            char line[256];
            std::snprintf(line, sizeof(line),
                          "%-7d %-9s %-15.6g %-13.3g %-15.6g %-14.6g %-10.4g",
                          need(item, "degree").get<int>(), kind.c_str(),
                          need(item, "mean").get<double>(),
                          need(item, "standard_error").get<double>(),
                          need(pred, "total").get<double>(),
                          need(item, "residual").get<double>(),
                          need(item, "residual_scaled").get<double>());
            out << line;
            const json& unresolved = need(pred, "unresolved");
            if (!unresolved.empty()) {
                out << " unresolved:";
                for (const json& u : unresolved) out << " " << u.get<std::string>();
            }
            if (item.contains("tail")) {
                out << "  tail>=" << need(item.at("tail"), "threshold").get<double>()
                    << ": " << need(item.at("tail"), "fraction").get<double>();
            }
            out << "\n";
        }
        if (root.contains("sweep_fits")) {
            for (const json& fit : root.at("sweep_fits")) {
                out << "fit " << need(fit, "kind").get<std::string>() << ": a("
                    << fit.at("basis")[0].get<std::string>() << ") = "
                    << need(fit, "a").get<double>() << " +- "
                    << 2.0 * need(fit, "a_stderr").get<double>() << ", b("
                    << fit.at("basis")[1].get<std::string>() << ") = "
                    << need(fit, "b").get<double>() << " +- "
                    << 2.0 * need(fit, "b_stderr").get<double>() << "\n";
            }
        }
    }
    std::cout << out.str();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random SU(2) polynomial zeros on the sphere: energies, "
                 "pair statistics and minimal-energy baselines"};
    app.require_subcommand(1);

    // sample
    auto* sample = app.add_subcommand("sample", "sample zeros of one random polynomial");
    int sample_degree = 50;
    std::uint64_t sample_seed = 1;
    std::string sample_out = "sample_out";
    sample->add_option("--degree", sample_degree, "polynomial degree")->check(CLI::PositiveNumber);
    sample->add_option("--seed", sample_seed, "root seed");
    sample->add_option("--out", sample_out, "output directory");

    // energy
    auto* energy = app.add_subcommand("energy", "energies of one configuration");
    int energy_degree = 100;
    std::uint64_t energy_seed = 1;
    std::string energy_points;
    std::vector<double> energy_s;
    unsigned energy_workers = default_workers();
    energy->add_option("--degree", energy_degree, "polynomial degree (sampled mode)");
    energy->add_option("--seed", energy_seed, "root seed (sampled mode)");
    energy->add_option("--points", energy_points, "CSV of unit vectors instead of sampling");
    energy->add_option("--s", energy_s, "Riesz exponents")->delimiter(',');
    energy->add_option("--workers", energy_workers, "worker threads (0 = auto)");

    // predict
    auto* predict = app.add_subcommand("predict", "closed-form predictors");
    long long predict_n = 100;
    std::string predict_kind = "green";
    double predict_s = 1.0;
    std::string predict_minref;
    predict->add_option("--n", predict_n, "number of points")->required();
    predict->add_option("--kind", predict_kind, "green | log | riesz");
    predict->add_option("--s", predict_s, "Riesz exponent for --kind riesz");
    predict->add_option("--min-ref", predict_minref,
                        "green_elkies | riesz2_KS | rieszS_KS_bounds | log_BBP");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Monte Carlo trials and regression");
    std::string sweep_config;
    std::vector<int> sweep_degrees;
    int sweep_trials = 0;
    std::uint64_t sweep_seed = 0;
    std::vector<double> sweep_s;
    std::string sweep_out;
    unsigned sweep_workers = default_workers();
    sweep->add_option("--config", sweep_config, "config file (key = value format)");
    sweep->add_option("--degrees", sweep_degrees, "degrees")->delimiter(',');
    sweep->add_option("--trials", sweep_trials, "trials per degree");
    auto* seed_opt = sweep->add_option("--seed", sweep_seed, "root seed");
    sweep->add_option("--s", sweep_s, "Riesz exponents")->delimiter(',');
    sweep->add_option("--out", sweep_out, "output directory");
    sweep->add_option("--workers", sweep_workers, "worker threads (0 = auto)");

    // paircorr
    auto* paircorr = app.add_subcommand("paircorr", "pair-correlation experiment");
    int pc_degree = 500, pc_trials = 200, pc_bins = 40;
    std::uint64_t pc_seed = 1;
    double pc_max_u = 4.0;
    bool pc_poisson = false;
    std::string pc_out;
    unsigned pc_workers = default_workers();
    paircorr->add_option("--degree", pc_degree, "polynomial degree / point count");
    paircorr->add_option("--trials", pc_trials, "number of trials");
    paircorr->add_option("--seed", pc_seed, "root seed");
    paircorr->add_option("--max-u", pc_max_u, "window in scaled distance");
    paircorr->add_option("--bins", pc_bins, "histogram bins");
    paircorr->add_flag("--poisson-control", pc_poisson,
                       "uniform i.i.d. control instead of random zeros");
    paircorr->add_option("--out", pc_out, "output CSV ('-' = stdout)");
    paircorr->add_option("--workers", pc_workers, "worker threads (0 = auto)");

    // minimize
    auto* minimize = app.add_subcommand("minimize", "near-minimal energy configurations");
    int min_n = 12, min_restarts = 20, min_iters = 20000;
    std::string min_kind = "log";
    double min_s = 2.0, min_gtol = 1e-8;
    std::uint64_t min_seed = 1;
    std::string min_out;
    unsigned min_workers = default_workers();
    minimize->add_option("--n", min_n, "number of points")->required();
    minimize->add_option("--kind", min_kind, "log | riesz | green");
    minimize->add_option("--s", min_s, "Riesz exponent");
    minimize->add_option("--restarts", min_restarts, "independent restarts");
    minimize->add_option("--max-iterations", min_iters, "iteration cap per restart");
    minimize->add_option("--gtol", min_gtol, "tangent-gradient tolerance");
    minimize->add_option("--seed", min_seed, "root seed");
    minimize->add_option("--out", min_out, "CSV of the best configuration");
    minimize->add_option("--workers", min_workers, "worker threads (0 = auto)");

    // hcurve
    auto* hcurve = app.add_subcommand("hcurve", "emit (t, H(t)-1) samples");
    double hc_tmax = 10.0;
    int hc_samples = 201;
    std::string hc_out;
    hcurve->add_option("--tmax", hc_tmax, "upper end of the t grid");
    hcurve->add_option("--samples", hc_samples, "grid size");
    hcurve->add_option("--out", hc_out, "output CSV ('-' = stdout)");

    // report
    auto* report = app.add_subcommand("report", "tabulate saved summary.json files");
    std::vector<std::string> report_paths;
    report->add_option("summaries", report_paths, "summary.json paths");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << "error: usage-error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (sample->parsed()) return cmd_sample(sample_degree, sample_seed, sample_out);
        if (energy->parsed()) {
            return cmd_energy(energy_degree, energy_seed, energy_points, energy_s,
                              energy_workers);
        }
        if (predict->parsed()) {
            return cmd_predict(predict_n, predict_kind, predict_s, predict_minref);
        }
        if (sweep->parsed()) {
            return cmd_sweep(config_from_cli(sweep_config, sweep_degrees, sweep_trials,
                                             sweep_seed, seed_opt->count() > 0, sweep_s,
                                             sweep_out, sweep_workers));
        }
        if (paircorr->parsed()) {
            return cmd_paircorr(pc_degree, pc_trials, pc_seed, pc_max_u, pc_bins,
                                pc_poisson, pc_out, pc_workers);
        }
        if (minimize->parsed()) {
            return cmd_minimize(min_n, min_kind, min_s, min_restarts, min_iters,
                                min_gtol, min_seed, min_out, min_workers);
        }
        if (hcurve->parsed()) return cmd_hcurve(hc_tmax, hc_samples, hc_out);
        if (report->parsed()) return cmd_report(report_paths);
    } catch (const rz::Error& e) {
        std::cerr << "error: " << e.cls() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "error: usage-error: no subcommand\n";
    return 2;
}
