#include "randzeros/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "randzeros/errors.hpp"
#include "randzeros/parallel.hpp"

namespace randzeros {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kChunkPairs = 8192;

// Neumaier-compensated accumulator.
struct Kahan {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + comp; }
};

// Unordered pair index -> (i, j), i < j, in the fixed lexicographic order
// (0,1), (0,2), ..., (0,N-1), (1,2), ... used by every chunk schedule.
struct PairCursor {
    std::size_t i, j, n;
    explicit PairCursor(std::size_t n_points, std::size_t linear) : n(n_points) {
        // Solve for the row: linear indices of row i start at
        // offset(i) = i*n - i(i+3)/2 ... found by walking rows; the walk is
        // O(N) once per chunk which is negligible next to the kernel work.
        i = 0;
        std::size_t row_len = n - 1;
        std::size_t remaining = linear;
        while (remaining >= row_len) {
            remaining -= row_len;
            ++i;
            --row_len;
        }
        j = i + 1 + remaining;
    }
    void advance() {
        if (++j == n) {
            ++i;
            j = i + 1;
        }
    }
};

struct ChunkSums {
    Kahan log_sum;    // sum of -ln [z_i,z_j] over unordered pairs
    Kahan green_sum;  // sum of G(z_i,z_j) over unordered pairs
    std::vector<Kahan> s_sums;
    double min_chordal_sq = std::numeric_limits<double>::infinity();
};

// Canonical point order: lexicographic by (x, y, z). Makes the summation
// order, and therefore the rounded result, independent of the input
// permutation.
std::vector<SpherePoint> canonical_points(const SphereConfiguration& config) {
    std::vector<SpherePoint> pts = config.points;
    std::sort(pts.begin(), pts.end(), [](const SpherePoint& a, const SpherePoint& b) {
        if (a.x != b.x) return a.x < b.x;
        if (a.y != b.y) return a.y < b.y;
        return a.z < b.z;
    });
    return pts;
}

struct SweepResult {
    double log_energy = 0.0;   // ordered pairs
    double green_energy = 0.0; // ordered pairs
    std::vector<double> s_energies;
    double min_chordal = 0.0;
    bool degenerate = false;
};

SweepResult pair_sweep(const SphereConfiguration& config,
                       const std::vector<double>& s_values,
                       bool want_green, unsigned workers) {
    const std::vector<SpherePoint> pts = canonical_points(config);
    const std::size_t n = pts.size();
    const std::size_t n_pairs = n * (n - 1) / 2;
    const std::size_t n_chunks = (n_pairs + kChunkPairs - 1) / kChunkPairs;

    std::vector<ChunkSums> partials(std::max<std::size_t>(n_chunks, 1));
    for (ChunkSums& c : partials) c.s_sums.resize(s_values.size());

    parallel_chunks(n_chunks, workers, [&](std::size_t chunk) {
        const std::size_t begin = chunk * kChunkPairs;
        const std::size_t end = std::min(begin + kChunkPairs, n_pairs);
        ChunkSums& out = partials[chunk];
        PairCursor cursor(n, begin);
        for (std::size_t p = begin; p < end; ++p, cursor.advance()) {
            const SpherePoint& a = pts[cursor.i];
            const SpherePoint& b = pts[cursor.j];
            const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
            const double u = dx * dx + dy * dy + dz * dz; // squared chordal
            out.min_chordal_sq = std::min(out.min_chordal_sq, u);
            // Below the singularity floor the whole sweep is discarded as
            // degenerate; skip the kernels so nothing throws mid-chunk.
            if (u < kSingularityFloor * kSingularityFloor) continue;
            const double lu = std::log(u);
            out.log_sum.add(-0.5 * lu);
            if (want_green) out.green_sum.add(greens_from_chordal_sq(u));
            for (std::size_t k = 0; k < s_values.size(); ++k) {
                out.s_sums[k].add(std::exp(-0.5 * s_values[k] * lu));
            }
        }
    });

    // Ordered fold over chunk partials, then the ordered-pair factor 2.
    Kahan log_total, green_total;
    std::vector<Kahan> s_totals(s_values.size());
    double min_sq = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < n_chunks; ++c) {
        log_total.add(partials[c].log_sum.value());
        green_total.add(partials[c].green_sum.value());
        for (std::size_t k = 0; k < s_values.size(); ++k) {
            s_totals[k].add(partials[c].s_sums[k].value());
        }
        min_sq = std::min(min_sq, partials[c].min_chordal_sq);
    }

    SweepResult res;
    res.min_chordal = n >= 2 ? std::sqrt(min_sq) : 0.0;
    res.degenerate = n >= 2 && res.min_chordal < kSingularityFloor;
    res.log_energy = 2.0 * log_total.value();
    res.green_energy = 2.0 * green_total.value();
    res.s_energies.resize(s_values.size());
    for (std::size_t k = 0; k < s_values.size(); ++k) {
        res.s_energies[k] = 2.0 * s_totals[k].value();
    }
    return res;
}

void require_nonempty(const SphereConfiguration& config) {
    if (config.points.empty()) throw DomainError("empty configuration");
}

[[noreturn]] void throw_degenerate(double min_chordal) {
    throw DegenerateConfigurationError("pair distance below the singularity floor",
                                       min_chordal);
}

} // namespace

double s_energy(const SphereConfiguration& config, double s, unsigned workers) {
    require_nonempty(config);
    if (!(s > 0.0 && s < 4.0)) throw DomainError("s-energy requires s in (0, 4)");
    SweepResult r = pair_sweep(config, {s}, false, workers);
    if (r.degenerate) throw_degenerate(r.min_chordal);
    return r.s_energies[0];
}

double log_energy(const SphereConfiguration& config, unsigned workers) {
    require_nonempty(config);
    SweepResult r = pair_sweep(config, {}, false, workers);
    if (r.degenerate) throw_degenerate(r.min_chordal);
    return r.log_energy;
}

double green_energy(const SphereConfiguration& config, unsigned workers) {
    require_nonempty(config);
    SweepResult r = pair_sweep(config, {}, true, workers);
    if (r.degenerate) throw_degenerate(r.min_chordal);
    return r.green_energy;
}

double min_pair_chordal(const SphereConfiguration& config, unsigned workers) {
    if (config.points.size() < 2) {
        throw DomainError("min_pair_chordal requires at least two points");
    }
    SweepResult r = pair_sweep(config, {}, false, workers);
    return r.min_chordal;
}

EnergyReport compute_report(const SphereConfiguration& config,
                            const std::vector<double>& s_values,
                            bool include_green, bool include_log,
                            unsigned workers) {
    require_nonempty(config);
    for (double s : s_values) {
        if (!(s > 0.0 && s < 4.0)) throw DomainError("s-energy requires s in (0, 4)");
    }
    SweepResult r = pair_sweep(config, s_values, include_green, workers);

    EnergyReport report;
    report.n_points = static_cast<int>(config.points.size());
    report.min_pair_chordal = r.min_chordal;
    report.degenerate = r.degenerate;
    if (!r.degenerate) {
        if (include_green) report.green_energy = r.green_energy;
        if (include_log) report.log_energy = r.log_energy;
        for (std::size_t k = 0; k < s_values.size(); ++k) {
            report.s_energies.emplace_back(s_values[k], r.s_energies[k]);
        }
    }
    return report;
}

} // namespace randzeros
