#include "randzeros/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "randzeros/errors.hpp"
#include "randzeros/parallel.hpp"
#include "randzeros/rootfind.hpp"

namespace randzeros {

namespace {

using json = nlohmann::ordered_json;

constexpr double kDiscardChordalFloor = 1e-9; // close-zero guard, see rootfind
constexpr double kTailEpsilon = 0.5;          // Elkies threshold slack per N ln N

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_s(double s) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", s);
    return buf;
}

std::string kind_label(double s) { return std::string("s=") + format_s(s); }

// ---------------------------------------------------------------------------
// Config file parsing: flat "key = value" lines plus one level of [table]
// sections, '#' comments, arrays of numbers in brackets, quoted strings,
// booleans, integers and floats. Unknown keys are errors.
// ---------------------------------------------------------------------------

struct RawValue {
    std::string text;
    int line = 0;
};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

[[noreturn]] void parse_fail(int line, const std::string& message) {
    throw ParseError("config line " + std::to_string(line) + ": " + message);
}

double parse_number(const RawValue& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v.text, &pos);
        if (pos != v.text.size()) parse_fail(v.line, "trailing characters in number");
        return d;
    } catch (const std::invalid_argument&) {
        parse_fail(v.line, "expected a number, got '" + v.text + "'");
    } catch (const std::out_of_range&) {
        parse_fail(v.line, "number out of range: '" + v.text + "'");
    }
}

bool parse_bool(const RawValue& v) {
    if (v.text == "true") return true;
    if (v.text == "false") return false;
    parse_fail(v.line, "expected true/false, got '" + v.text + "'");
}

std::string parse_string(const RawValue& v) {
    if (v.text.size() >= 2 && v.text.front() == '"' && v.text.back() == '"') {
        return v.text.substr(1, v.text.size() - 2);
    }
    parse_fail(v.line, "expected a quoted string, got '" + v.text + "'");
}

std::vector<double> parse_array(const RawValue& v) {
    if (v.text.empty() || v.text.front() != '[' || v.text.back() != ']') {
        parse_fail(v.line, "expected [a, b, ...], got '" + v.text + "'");
    }
    std::vector<double> out;
    std::stringstream ss(v.text.substr(1, v.text.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_number({item, v.line}));
    }
    return out;
}

} // namespace

void ExperimentConfig::validate() const {
    if (degrees.empty()) throw DomainError("config: degrees must be non-empty");
    for (int d : degrees) {
        if (d < 1) throw DomainError("config: degrees must be >= 1");
    }
    if (trials < 1) throw DomainError("config: trials must be >= 1");
    for (double s : s_values) {
        if (!(s > 0.0 && s < 4.0)) throw DomainError("config: s_values must lie in (0, 4)");
    }
    if (paircorr) {
        if (!(paircorr->max_u > 0.0)) throw DomainError("config: paircorr.max_u must be > 0");
        if (paircorr->bins < 4) throw DomainError("config: paircorr.bins must be >= 4");
    }
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig config;
    config.output_dir.clear();

    std::map<std::string, bool> seen;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    bool have_degrees = false, have_trials = false, have_seed = false, have_out = false;

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') parse_fail(line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "paircorr") parse_fail(line_no, "unknown section [" + section + "]");
            if (!config.paircorr) config.paircorr = PaircorrSettings{};
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) parse_fail(line_no, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const RawValue value{trim(line.substr(eq + 1)), line_no};
        if (key.empty()) parse_fail(line_no, "empty key");
        const std::string qualified = section.empty() ? key : section + "." + key;
        if (seen[qualified]) parse_fail(line_no, "duplicate key '" + qualified + "'");
        seen[qualified] = true;

        if (section == "paircorr") {
            if (key == "max_u") config.paircorr->max_u = parse_number(value);
            else if (key == "bins") config.paircorr->bins = static_cast<int>(parse_number(value));
            else parse_fail(line_no, "unknown key 'paircorr." + key + "'");
            continue;
        }
        if (key == "degrees") {
            for (double d : parse_array(value)) config.degrees.push_back(static_cast<int>(d));
            have_degrees = true;
        } else if (key == "trials") {
            config.trials = static_cast<int>(parse_number(value));
            have_trials = true;
        } else if (key == "root_seed") {
            config.root_seed = static_cast<std::uint64_t>(parse_number(value));
            have_seed = true;
        } else if (key == "s_values") {
            config.s_values = parse_array(value);
        } else if (key == "include_green") {
            config.include_green = parse_bool(value);
        } else if (key == "include_log") {
            config.include_log = parse_bool(value);
        } else if (key == "output_dir") {
            config.output_dir = parse_string(value);
            have_out = true;
        } else if (key == "worker_count") {
            config.worker_count = static_cast<unsigned>(parse_number(value));
        } else {
            parse_fail(line_no, "unknown key '" + key + "'");
        }
    }
    if (!have_degrees) throw ParseError("config: missing required key 'degrees'");
    if (!have_trials) throw ParseError("config: missing required key 'trials'");
    if (!have_seed) throw ParseError("config: missing required key 'root_seed'");
    if (!have_out) throw ParseError("config: missing required key 'output_dir'");
    config.validate();
    return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

// ---------------------------------------------------------------------------
// Trial execution
// ---------------------------------------------------------------------------

namespace {

struct TrialOutput {
    TrialRecord record;
    PairHistogram histogram; // empty when paircorr off or trial discarded
    bool has_histogram = false;
};

TrialOutput run_one_trial(const ExperimentConfig& config, int degree,
                          std::uint64_t stream_index) {
    const auto t0 = std::chrono::steady_clock::now();
    TrialOutput out;
    TrialRecord& rec = out.record;
    rec.degree = degree;
    rec.trial_index = stream_index;

    const RandomSeed seed{config.root_seed, stream_index};
    const PolynomialSample poly = sample_su2(degree, seed);
    const RootSet roots = find_roots(poly);
    rec.root_converged = roots.converged;
    if (static_cast<int>(roots.roots.size()) != degree) {
        throw DomainError("zero-count audit failed: root multiset != degree");
    }
    if (!roots.converged) {
        rec.discarded = true;
        rec.reason = DiscardReason::rootfind_nonconverged;
    } else {
        const SphereConfiguration sphere_config =
            configuration_from_roots(roots, ConfigurationSource{seed, degree});
        EnergyReport report = compute_report(sphere_config, config.s_values,
                                             config.include_green, config.include_log,
                                             /*workers=*/1);
        if (report.degenerate || report.min_pair_chordal < kDiscardChordalFloor) {
            rec.discarded = true;
            rec.reason = DiscardReason::degenerate;
            rec.energies.n_points = report.n_points;
            rec.energies.min_pair_chordal = report.min_pair_chordal;
            rec.energies.degenerate = true;
        } else {
            rec.energies = std::move(report);
            if (config.include_green && config.include_log) {
                // Per-trial audit of the Green/log linkage identity.
                const double n = static_cast<double>(degree);
                const double expected = *rec.energies.log_energy / (2.0 * std::numbers::pi)
                    + (n * n - n) * (2.0 * std::numbers::ln2 - 1.0)
                          / (4.0 * std::numbers::pi);
                const double got = *rec.energies.green_energy;
                const double scale = std::max({1.0, std::abs(expected), std::abs(got)});
                if (std::abs(got - expected) > 1e-9 * scale) {
                    throw DomainError("energy-linkage audit failed at degree "
                                      + std::to_string(degree));
                }
            }
            if (config.paircorr) {
                out.histogram = accumulate_pairs(sphere_config, degree,
                                                 config.paircorr->max_u,
                                                 config.paircorr->bins);
                out.has_histogram = true;
            }
        }
    }
    const auto t1 = std::chrono::steady_clock::now();
    rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return out;
}

const char* reason_label(DiscardReason r) {
    switch (r) {
        case DiscardReason::rootfind_nonconverged: return "rootfind-nonconverged";
        case DiscardReason::degenerate: return "degenerate";
        case DiscardReason::none:
        default: return "";
    }
}

struct Moments {
    int n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
    void add(double v) {
        ++n;
        const double delta = v - mean;
        mean += delta / n;
        m2 += delta * (v - mean);
        min = std::min(min, v);
        max = std::max(max, v);
    }
    double standard_error() const {
        if (n < 2) return 0.0;
        return std::sqrt(m2 / (n - 1) / n);
    }
};

struct Basis {
    std::string names[2];
    std::function<double(double)> f0;
    std::function<double(double)> f1;
};

Basis basis_for(const std::string& kind, double s) {
    if (kind == "green") {
        return {{"N log N", "N"},
                [](double n) { return n * std::log(n); },
                [](double n) { return n; }};
    }
    if (kind == "log") {
        return {{"N^2", "N log^2 N"},
                [](double n) { return n * n; },
                [](double n) { return n * std::log(n) * std::log(n); }};
    }
    if (s == 2.0) {
        return {{"N^2 log N", "N^2 log log N"},
                [](double n) { return n * n * std::log(n); },
                [](double n) { return n * n * std::log(std::log(n)); }};
    }
    // Riesz, s != 2: leading power with the log-corrected companion.
    const auto companion = [s](double n) {
        return std::pow(n, 1.0 + 0.5 * s) * std::pow(std::log(n), 1.0 - 0.5 * s);
    };
    if (s < 2.0) {
        return {{"N^2", "N^{1+s/2} (log N)^{1-s/2}"},
                [](double n) { return n * n; }, companion};
    }
    return {{"N^{1+s/2}", "N^{1+s/2} (log N)^{1-s/2}"},
            [s](double n) { return std::pow(n, 1.0 + 0.5 * s); }, companion};
}

PredictorResult predictor_for(const std::string& kind, double s, int degree) {
    if (kind == "green") return predict_green_energy(degree);
    if (kind == "log") return predict_log_energy(degree);
    return predict_s_energy(degree, s);
}

std::pair<std::string, double> residual_scale_for(const std::string& kind, double s,
                                                  int degree) {
    const double n = static_cast<double>(degree);
    if (kind == "green") return {"N log N", n * std::log(n)};
    if (kind == "log") return {"N^2", n * n};
    if (s < 2.0) return {"N^2", n * n};
    if (s == 2.0) return {"N^2 log N", n * n * std::log(n)};
    return {"N^{1+s/2}", std::pow(n, 1.0 + 0.5 * s)};
}

std::optional<double> energy_of(const TrialRecord& rec, const std::string& kind) {
    if (rec.discarded) return std::nullopt;
    if (kind == "green") return rec.energies.green_energy;
    if (kind == "log") return rec.energies.log_energy;
    for (const auto& [s, value] : rec.energies.s_energies) {
        if (kind_label(s) == kind) return value;
    }
    return std::nullopt;
}

std::vector<std::string> kinds_of(const ExperimentConfig& config) {
    std::vector<std::string> kinds;
    if (config.include_green) kinds.push_back("green");
    if (config.include_log) kinds.push_back("log");
    for (double s : config.s_values) kinds.push_back(kind_label(s));
    return kinds;
}

double s_of_kind(const std::string& kind) {
    if (kind.rfind("s=", 0) == 0) return std::stod(kind.substr(2));
    return 0.0;
}

} // namespace

ExperimentResult run_trials(const ExperimentConfig& config, bool write_outputs) {
    config.validate();

    namespace fs = std::filesystem;
    if (write_outputs) {
        // Fail on an unwritable destination before burning compute.
        if (config.output_dir.empty()) {
            throw IoError("output_dir is required when writing results");
        }
        std::error_code ec;
        fs::create_directories(config.output_dir, ec);
        if (ec) throw IoError("cannot create output_dir: " + config.output_dir);
        const fs::path probe = fs::path(config.output_dir) / ".write_probe";
        std::ofstream test(probe);
        if (!test) throw IoError("output_dir is not writable: " + config.output_dir);
        test.close();
        fs::remove(probe, ec);
    }

    // Stream indices are assigned degree-major before dispatch, so the
    // schedule cannot influence any draw.
    struct Task {
        int degree;
        std::uint64_t stream;
    };
    std::vector<Task> tasks;
    for (std::size_t d = 0; d < config.degrees.size(); ++d) {
        for (int t = 0; t < config.trials; ++t) {
            tasks.push_back({config.degrees[d],
                             static_cast<std::uint64_t>(d) * config.trials
                                 + static_cast<std::uint64_t>(t)});
        }
    }

    std::vector<TrialOutput> outputs(tasks.size());
    parallel_chunks(tasks.size(), config.worker_count, [&](std::size_t i) {
        outputs[i] = run_one_trial(config, tasks[i].degree, tasks[i].stream);
    });

    ExperimentResult result;
    result.table.config = config;
    result.table.records.reserve(tasks.size());
    for (TrialOutput& out : outputs) {
        result.table.records.push_back(std::move(out.record));
    }
    if (config.paircorr) {
        for (std::size_t d = 0; d < config.degrees.size(); ++d) {
            PairHistogram merged;
            bool have = false;
            for (std::size_t i = 0; i < tasks.size(); ++i) {
                if (tasks[i].degree != config.degrees[d] || !outputs[i].has_histogram) {
                    continue;
                }
                if (!have) {
                    merged = outputs[i].histogram;
                    have = true;
                } else {
                    merge_histograms(merged, outputs[i].histogram);
                }
            }
            if (have) result.table.histograms.push_back(std::move(merged));
        }
    }

    result.summary = summarize(result.table);

    if (write_outputs) {
        const fs::path dir(config.output_dir);
        {
            std::ofstream csv(dir / "trials.csv");
            if (!csv) throw IoError("cannot write trials.csv");
            csv << trials_csv(result.table);
        }
        {
            std::ofstream js(dir / "summary.json");
            if (!js) throw IoError("cannot write summary.json");
            js << summary_json(config, result.summary) << "\n";
        }
    }
    return result;
}

double tail_fraction(const TrialTable& table, int degree, const std::string& kind,
                     double threshold) {
    int used = 0, above = 0;
    for (const TrialRecord& rec : table.records) {
        if (rec.degree != degree) continue;
        const std::optional<double> e = energy_of(rec, kind);
        if (!e) continue;
        ++used;
        if (*e >= threshold) ++above;
    }
    if (used == 0) {
        throw DomainError("no usable trials at degree " + std::to_string(degree));
    }
    return static_cast<double>(above) / used;
}

std::vector<SweepFit> sweep_fits(const TrialTable& table) {
    const std::vector<int>& degrees = table.config.degrees;
    if (degrees.size() < 3) throw DomainError("sweep requires at least 3 degrees");

    std::vector<SweepFit> fits;
    for (const std::string& kind : kinds_of(table.config)) {
        const double s = s_of_kind(kind);
        const Basis basis = basis_for(kind, s);

        // Two-parameter least squares on the per-degree means.
        double a00 = 0, a01 = 0, a11 = 0, r0 = 0, r1 = 0;
        std::vector<double> xs0, xs1, ys;
        for (int degree : degrees) {
            Moments m;
            for (const TrialRecord& rec : table.records) {
                if (rec.degree != degree) continue;
                if (const auto e = energy_of(rec, kind)) m.add(*e);
            }
            if (m.n == 0) throw DomainError("no usable trials at degree "
                                            + std::to_string(degree));
            const double n = static_cast<double>(degree);
            const double x0 = basis.f0(n), x1 = basis.f1(n);
            xs0.push_back(x0);
            xs1.push_back(x1);
            ys.push_back(m.mean);
            a00 += x0 * x0;
            a01 += x0 * x1;
            a11 += x1 * x1;
            r0 += x0 * m.mean;
            r1 += x1 * m.mean;
        }
        const double det = a00 * a11 - a01 * a01;
        if (!(std::abs(det) > 1e-12 * std::max(a00 * a11, 1.0))) {
            throw DomainError("singular design matrix in sweep fit for " + kind);
        }
        SweepFit fit;
        fit.kind = kind;
        fit.basis[0] = basis.names[0];
        fit.basis[1] = basis.names[1];
        fit.a = (a11 * r0 - a01 * r1) / det;
        fit.b = (a00 * r1 - a01 * r0) / det;

        double rss = 0.0;
        for (std::size_t i = 0; i < ys.size(); ++i) {
            const double pred = fit.a * xs0[i] + fit.b * xs1[i];
            rss += (ys[i] - pred) * (ys[i] - pred);
        }
        const int dof = static_cast<int>(ys.size()) - 2;
        const double sigma2 = dof > 0 ? rss / dof : 0.0;
        fit.a_stderr = std::sqrt(std::max(0.0, sigma2 * a11 / det));
        fit.b_stderr = std::sqrt(std::max(0.0, sigma2 * a00 / det));
        fits.push_back(fit);
    }
    return fits;
}

SummaryStats summarize(const TrialTable& table) {
    const ExperimentConfig& config = table.config;
    SummaryStats summary;

    for (int degree : config.degrees) {
        int discarded = 0, total = 0;
        for (const TrialRecord& rec : table.records) {
            if (rec.degree != degree) continue;
            ++total;
            if (rec.discarded) ++discarded;
        }
        const double frac = total > 0 ? static_cast<double>(discarded) / total : 0.0;
        summary.max_discard_fraction = std::max(summary.max_discard_fraction, frac);
        if (frac > 0.10) summary.healthy = false;

        for (const std::string& kind : kinds_of(config)) {
            const double s = s_of_kind(kind);
            Moments m;
            for (const TrialRecord& rec : table.records) {
                if (rec.degree != degree) continue;
                if (const auto e = energy_of(rec, kind)) m.add(*e);
            }
            KindSummary ks;
            ks.degree = degree;
            ks.kind = kind;
            ks.n_used = m.n;
            ks.n_discarded = discarded;
            if (m.n > 0) {
                ks.mean = m.mean;
                ks.standard_error = m.standard_error();
                ks.min = m.min;
                ks.max = m.max;
            }
            ks.predictor = predictor_for(kind, s, degree);
            ks.residual = ks.mean - ks.predictor.total;
            const auto [scale_name, scale] = residual_scale_for(kind, s, degree);
            ks.residual_scale = scale_name;
            ks.residual_scaled = scale != 0.0 ? ks.residual / scale : 0.0;
            if (kind == "green" && m.n > 0) {
                const double n = static_cast<double>(degree);
                const double threshold = minimum_reference(degree, MinReference::green_elkies).total
                    + kTailEpsilon * n * std::log(n);
                ks.tail_threshold = threshold;
                ks.tail_fraction = tail_fraction(table, degree, "green", threshold);
            }
            summary.kinds.push_back(std::move(ks));
        }
    }
    if (config.degrees.size() >= 3) summary.fits = sweep_fits(table);
    return summary;
}

std::string trials_csv(const TrialTable& table) {
    const ExperimentConfig& config = table.config;
    std::ostringstream out;
    out << "degree,trial_index,converged,discarded,reason";
    if (config.include_green) out << ",E_green";
    if (config.include_log) out << ",E_log";
    for (double s : config.s_values) out << ",E_s_" << format_s(s);
    out << ",min_pair_chordal,wall_ms\n";

    for (const TrialRecord& rec : table.records) {
        out << rec.degree << ',' << rec.trial_index << ','
            << (rec.root_converged ? 1 : 0) << ',' << (rec.discarded ? 1 : 0) << ','
            << reason_label(rec.reason);
        const auto emit = [&](const std::optional<double>& v) {
            out << ',';
            if (v) out << format_double(*v);
        };
        if (config.include_green) emit(rec.energies.green_energy);
        if (config.include_log) emit(rec.energies.log_energy);
        for (double s : config.s_values) {
            std::optional<double> v;
            for (const auto& [sv, e] : rec.energies.s_energies) {
                if (sv == s) v = e;
            }
            emit(v);
        }
        out << ',';
        if (!rec.discarded || rec.reason == DiscardReason::degenerate) {
            out << format_double(rec.energies.min_pair_chordal);
        }
        char wall[32];
        std::snprintf(wall, sizeof(wall), "%.3f", rec.wall_ms);
        out << ',' << wall << '\n';
    }
    return out.str();
}

std::string summary_json(const ExperimentConfig& config, const SummaryStats& summary) {
    json root;
    root["root_seed"] = config.root_seed;
    root["trials_per_degree"] = config.trials;
    root["degrees"] = config.degrees;
    json s_vals = json::array();
    for (double s : config.s_values) s_vals.push_back(s);
    root["s_values"] = s_vals;
    root["healthy"] = summary.healthy;
    root["max_discard_fraction"] = summary.max_discard_fraction;

    json results = json::array();
    for (const KindSummary& ks : summary.kinds) {
        json item;
        item["degree"] = ks.degree;
        item["kind"] = ks.kind;
        item["n_used"] = ks.n_used;
        item["n_discarded"] = ks.n_discarded;
        item["mean"] = ks.mean;
        item["standard_error"] = ks.standard_error;
        item["min"] = ks.min;
        item["max"] = ks.max;
        json terms = json::array();
        for (const PredictorTerm& t : ks.predictor.terms) {
            json jt;
            jt["name"] = t.name;
            jt["value"] = t.value;
            if (!t.note.empty()) jt["note"] = t.note;
            terms.push_back(jt);
        }
        item["predictor"] = {{"total", ks.predictor.total},
                             {"terms", terms},
                             {"unresolved", ks.predictor.unresolved}};
        item["residual"] = ks.residual;
        item["residual_scale"] = ks.residual_scale;
        item["residual_scaled"] = ks.residual_scaled;
        if (ks.tail_threshold) {
            item["tail"] = {{"threshold", *ks.tail_threshold},
                            {"fraction", *ks.tail_fraction}};
        }
        results.push_back(item);
    }
    root["results"] = results;

    if (!summary.fits.empty()) {
        json fits = json::array();
        for (const SweepFit& f : summary.fits) {
            fits.push_back({{"kind", f.kind},
                            {"basis", {f.basis[0], f.basis[1]}},
                            {"a", f.a},
                            {"a_stderr", f.a_stderr},
                            {"b", f.b},
                            {"b_stderr", f.b_stderr}});
        }
        root["sweep_fits"] = fits;
    }
    return root.dump(2);
}

} // namespace randzeros
