#include "randzeros/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "randzeros/errors.hpp"
#include "randzeros/sphere.hpp"

namespace randzeros {

namespace {

using cplx = std::complex<double>;

// Vanishing leading coefficients are dropped one degree at a time; each
// dropped degree is a zero at infinity. "Vanishing" is judged on the Gaussian
// scale c_j = coefficients[j] / sqrt(C(N,j)): the ensemble weights make the
// raw leading coefficient smaller than the middle ones by ~2^{-N/2} even when
// c_N is O(1), so a raw-coefficient threshold would misread every sample
// beyond N ~ 90 as degree-deflated. Comparisons run in log space.
struct Deflated {
    std::vector<cplx> coeffs; // effective polynomial, degree = size - 1
    int infinity_roots = 0;
};

Deflated deflate(const PolynomialSample& poly, double threshold) {
    const int n = poly.degree;
    const double neg_inf = -std::numeric_limits<double>::infinity();
    std::vector<double> log_c(poly.coefficients.size(), neg_inf);
    double max_log = neg_inf;
    for (std::size_t j = 0; j < poly.coefficients.size(); ++j) {
        const double mag = std::abs(poly.coefficients[j]);
        if (mag > 0.0) {
            log_c[j] = std::log(mag) - 0.5 * log_binomial(n, static_cast<long long>(j));
            max_log = std::max(max_log, log_c[j]);
        }
    }
    if (max_log == neg_inf) throw DomainError("all-zero polynomial has no root set");

    const double cutoff = std::log(threshold) + max_log;
    Deflated d;
    d.coeffs = poly.coefficients;
    std::size_t top = log_c.size() - 1;
    while (d.coeffs.size() > 1 && log_c[top] < cutoff) {
        d.coeffs.pop_back();
        ++d.infinity_roots;
        --top;
    }
    return d;
}

// Horner evaluation of p and p' at z; caller guarantees |z| <= 1 so the
// running values stay bounded by (n+1) max|a|.
void horner(const std::vector<cplx>& a, cplx z, cplx& p, cplx& dp) {
    p = a.back();
    dp = 0.0;
    for (int j = static_cast<int>(a.size()) - 2; j >= 0; --j) {
        dp = dp * z + p;
        p = p * z + a[static_cast<std::size_t>(j)];
    }
}

// Newton correction p/p' at z, evaluated on whichever of p or its reversal
// keeps the argument inside the unit disk. For |z| > 1, with q(w) = z^n p(1/w)
// reversed coefficients and w = 1/z:
//   p(z)/p'(z) = z q(w) / (n q(w) - w q'(w)).
cplx newton_correction(const std::vector<cplx>& a, const std::vector<cplx>& rev,
                       cplx z, bool& derivative_vanished) {
    const double az = std::abs(z);
    cplx v, dv;
    derivative_vanished = false;
    if (az <= 1.0) {
        horner(a, z, v, dv);
        if (dv == cplx(0.0)) { derivative_vanished = true; return {}; }
        return v / dv;
    }
    const cplx w = 1.0 / z;
    horner(rev, w, v, dv);
    const double n = static_cast<double>(a.size() - 1);
    const cplx denom = n * v - w * dv;
    if (denom == cplx(0.0)) { derivative_vanished = true; return {}; }
    return z * v / denom;
}

// Backward-error residual |p(z)| / sum_j |a_j| |z|^j, with both numerator and
// normalizer evaluated on the side of the unit circle that keeps the Horner
// recursion bounded (for |z| > 1 the reversed polynomial gives the identical
// quantity, since both |p| and the normalizer pick up the same |z|^n). The
// normalizer must track |z|^j: the ensemble's coefficient spread makes p
// exponentially small near the origin, where any fixed scale would declare
// every point a root. 0/0 (possible only when p vanishes identically at z by
// underflow) counts as converged.
double scaled_residual(const std::vector<cplx>& a, const std::vector<cplx>& rev,
                       cplx z) {
    const double az = std::abs(z);
    const std::vector<cplx>& side = az <= 1.0 ? a : rev;
    const cplx x = az <= 1.0 ? z : 1.0 / z;
    const double ax = std::abs(x);
    cplx v = side.back();
    double norm = std::abs(side.back());
    for (int j = static_cast<int>(side.size()) - 2; j >= 0; --j) {
        v = v * x + side[static_cast<std::size_t>(j)];
        norm = norm * ax + std::abs(side[static_cast<std::size_t>(j)]);
    }
    const double pv = std::abs(v);
    if (norm == 0.0) return pv == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return pv / norm;
}

std::vector<cplx> reversed(const std::vector<cplx>& a) {
    return {a.rbegin(), a.rend()};
}

// Initial guesses on a circle of radius |a_0/a_n|^(1/n) (geometric mean of
// the root moduli), with an irrational angle offset so no starting point
// lands on a symmetry axis of the coefficients.
std::vector<cplx> initial_points(const std::vector<cplx>& a) {
    const int n = static_cast<int>(a.size()) - 1;
    const double mag0 = std::abs(a.front());
    const double magn = std::abs(a.back());
    double radius = 1.0;
    if (mag0 > 0.0 && magn > 0.0) {
        radius = std::exp((std::log(mag0) - std::log(magn)) / n);
        radius = std::clamp(radius, 1e-6, 1e6);
    }
    std::vector<cplx> z(static_cast<std::size_t>(n));
    const double offset = 0.5 * (std::numbers::sqrt2 - 1.0); // irrational, in (0,1)
    for (int i = 0; i < n; ++i) {
        const double angle = 2.0 * std::numbers::pi * (static_cast<double>(i) + offset) / n;
        z[static_cast<std::size_t>(i)] = std::polar(radius, angle);
    }
    return z;
}

RootSet package(const PolynomialSample& poly, const std::vector<cplx>& finite,
                int infinity_roots, bool converged, int iterations,
                const std::vector<cplx>& a, const std::vector<cplx>& rev) {
    RootSet rs;
    rs.degree = poly.degree;
    rs.converged = converged;
    rs.iterations = iterations;
    rs.roots.reserve(static_cast<std::size_t>(poly.degree));
    for (const cplx& z : finite) {
        ProjectiveRoot r;
        r.value = z;
        r.residual = scaled_residual(a, rev, z);
        rs.roots.push_back(r);
    }
    for (int i = 0; i < infinity_roots; ++i) {
        ProjectiveRoot r;
        r.at_infinity = true;
        rs.roots.push_back(r);
    }
    return rs;
}

} // namespace

double residual(const PolynomialSample& poly, cplx z) {
    const std::vector<cplx>& a = poly.coefficients;
    if (a.empty()) throw DomainError("empty coefficient vector");
    bool all_zero = true;
    for (const cplx& c : a) all_zero = all_zero && c == cplx(0.0);
    if (all_zero) throw DomainError("all-zero polynomial");
    return scaled_residual(a, reversed(a), z);
}

RootSet find_roots(const PolynomialSample& poly, const RootfindOptions& opts) {
    if (poly.degree < 1) throw DomainError("find_roots requires degree >= 1");
    Deflated d = deflate(poly, opts.deflation_threshold);

    const std::vector<cplx> a = std::move(d.coeffs);
    const std::vector<cplx> rev = reversed(a);

    const int n = static_cast<int>(a.size()) - 1;
    if (n == 0) {
        // Fully deflated: every zero is at infinity.
        return package(poly, {}, d.infinity_roots, true, 0, a, rev);
    }

    std::vector<cplx> z = initial_points(a);
    std::vector<cplx> newton(z.size());
    std::vector<bool> bad(z.size());

    bool converged = false;
    int sweep = 0;
    const double eps = std::numeric_limits<double>::epsilon();

    for (; sweep < opts.max_iterations; ++sweep) {
        for (std::size_t i = 0; i < z.size(); ++i) {
            bool dv = false;
            newton[i] = newton_correction(a, rev, z[i], dv);
            bad[i] = dv;
        }
        double max_step = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (bad[i]) {
                // Derivative vanished exactly (coincident guesses); nudge.
                z[i] += cplx(4.0 * eps * (1.0 + std::abs(z[i])), 0.0);
                max_step = 1.0;
                continue;
            }
            cplx repulsion = 0.0;
            for (std::size_t j = 0; j < z.size(); ++j) {
                if (j == i) continue;
                const cplx diff = z[i] - z[j];
                if (diff == cplx(0.0)) continue;
                repulsion += 1.0 / diff;
            }
            const cplx denom = 1.0 - newton[i] * repulsion;
            cplx step = denom == cplx(0.0) ? newton[i] : newton[i] / denom;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
                step = newton[i];
            }
            z[i] -= step;
            max_step = std::max(max_step,
                                std::abs(step) / std::max(1.0, std::abs(z[i])));
        }

        double worst = 0.0;
        for (const cplx& zi : z) {
            worst = std::max(worst, scaled_residual(a, rev, zi));
        }
        if (worst <= opts.tolerance) { converged = true; ++sweep; break; }
        if (max_step < 4.0 * eps) { ++sweep; break; } // stagnated; residual decides
    }

    // Newton endgame: the residual test is a backward-error criterion, so a
    // mildly ill-conditioned root can still sit ~1e-8 away from the true one.
    // A couple of quadratically convergent steps per root close that gap.
    for (cplx& zi : z) {
        for (int step = 0; step < 3; ++step) {
            bool dv = false;
            const cplx delta = newton_correction(a, rev, zi, dv);
            if (dv) break;
            zi -= delta;
            if (std::abs(delta) <= 2.0 * eps * std::max(1.0, std::abs(zi))) break;
        }
    }

    if (!converged) {
        double worst = 0.0;
        for (const cplx& zi : z) {
            worst = std::max(worst, scaled_residual(a, rev, zi));
        }
        converged = worst <= opts.tolerance;
    }

    return package(poly, z, d.infinity_roots, converged, sweep, a, rev);
}

RootSet companion_roots(const PolynomialSample& poly) {
    if (poly.degree < 1) throw DomainError("companion_roots requires degree >= 1");
    if (poly.degree > 256) {
        throw UnsupportedSizeError("companion_roots supports degree <= 256");
    }
    Deflated d = deflate(poly, 1e-13);
    const std::vector<cplx> a = d.coeffs;
    const std::vector<cplx> rev = reversed(a);

    const int n = static_cast<int>(a.size()) - 1;
    std::vector<cplx> finite;
    if (n >= 1) {
        Eigen::MatrixXcd cm = Eigen::MatrixXcd::Zero(n, n);
        const cplx lead = a.back();
        for (int i = 0; i + 1 < n; ++i) cm(i + 1, i) = 1.0;
        for (int i = 0; i < n; ++i) {
            cm(i, n - 1) = -a[static_cast<std::size_t>(i)] / lead;
        }

        // Parlett-Reinsch balancing with power-of-two scale factors (exact in
        // floating point).
        const double radix = 2.0, sqrdx = radix * radix;
        for (bool again = true; again;) {
            again = false;
            for (int i = 0; i < n; ++i) {
                double r = 0.0, c = 0.0;
                for (int j = 0; j < n; ++j) {
                    if (j == i) continue;
                    r += std::abs(cm(i, j));
                    c += std::abs(cm(j, i));
                }
                if (c == 0.0 || r == 0.0) continue;
                double g = r / radix, f = 1.0;
                const double s = c + r;
                while (c < g) { f *= radix; c *= sqrdx; }
                g = r * radix;
                while (c > g) { f /= radix; c /= sqrdx; }
                if ((c + r) / f < 0.95 * s) {
                    again = true;
                    cm.row(i) *= 1.0 / f;
                    cm.col(i) *= f;
                }
            }
        }

        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(cm, false);
        if (solver.info() != Eigen::Success) {
            throw DomainError("companion eigenvalue iteration failed");
        }
        finite.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
        // Canonical order for reproducibility across Eigen versions.
        std::sort(finite.begin(), finite.end(), [](const cplx& l, const cplx& r) {
            if (l.real() != r.real()) return l.real() < r.real();
            return l.imag() < r.imag();
        });
    }
    return package(poly, finite, d.infinity_roots, true, 0, a, rev);
}

double matched_root_distance(const RootSet& a, const RootSet& b) {
    if (a.roots.size() != b.roots.size()) {
        throw DomainError("matched_root_distance requires equal root counts");
    }
    const int n = static_cast<int>(a.roots.size());
    if (n == 0) return 0.0;

    std::vector<SpherePoint> pa(a.roots.size()), pb(b.roots.size());
    for (int i = 0; i < n; ++i) pa[static_cast<std::size_t>(i)] = to_sphere(a.roots[static_cast<std::size_t>(i)]);
    for (int i = 0; i < n; ++i) pb[static_cast<std::size_t>(i)] = to_sphere(b.roots[static_cast<std::size_t>(i)]);

    std::vector<double> cost(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            cost[static_cast<std::size_t>(i) * n + j] =
                chordal(pa[static_cast<std::size_t>(i)], pb[static_cast<std::size_t>(j)]);

    // Jonker-Volgenant shortest augmenting path assignment, O(n^3).
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<int> match(static_cast<std::size_t>(n) + 1, 0); // column -> row (1-based)
    std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
        std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            const int i0 = match[static_cast<std::size_t>(j0)];
            double delta = inf;
            int j1 = -1;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = cost[static_cast<std::size_t>(i0 - 1) * n + (j - 1)]
                                 - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    double worst = 0.0;
    for (int j = 1; j <= n; ++j) {
        const int i = match[static_cast<std::size_t>(j)];
        worst = std::max(worst, cost[static_cast<std::size_t>(i - 1) * n + (j - 1)]);
    }
    return worst;
}

} // namespace randzeros
