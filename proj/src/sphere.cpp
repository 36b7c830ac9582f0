#include "randzeros/sphere.hpp"

#include <cmath>
#include <numbers>

#include "randzeros/errors.hpp"

namespace randzeros {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kLog2 = std::numbers::ln2;
} // namespace

SpherePoint north_pole() { return {0.0, 0.0, 1.0}; }

SpherePoint to_sphere(std::complex<double> z) {
    const double a = std::abs(z);
    if (a <= 1.0) {
        const double d = a * a + 1.0;
        return {2.0 * z.real() / d, 2.0 * z.imag() / d, (a * a - 1.0) / d};
    }
    // Same map written in w = 1/z, exact at infinity and overflow-free:
    //   (2 Re w, -2 Im w, 1 - |w|^2) / (1 + |w|^2).
    const std::complex<double> w = 1.0 / z;
    const double aw2 = std::norm(w);
    const double d = aw2 + 1.0;
    return {2.0 * w.real() / d, -2.0 * w.imag() / d, (1.0 - aw2) / d};
}

SpherePoint to_sphere(const ProjectiveRoot& root) {
    return root.at_infinity ? north_pole() : to_sphere(root.value);
}

SphereConfiguration configuration_from_roots(const RootSet& roots,
                                             std::optional<ConfigurationSource> source) {
    SphereConfiguration config;
    config.source = source;
    config.points.reserve(roots.roots.size());
    for (const ProjectiveRoot& r : roots.roots) config.points.push_back(to_sphere(r));
    return config;
}

double chordal(const SpherePoint& a, const SpherePoint& b) {
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double round_distance(const SpherePoint& a, const SpherePoint& b) {
    const double dot = a.x * b.x + a.y * b.y + a.z * b.z;
    const double cx = a.y * b.z - a.z * b.y;
    const double cy = a.z * b.x - a.x * b.z;
    const double cz = a.x * b.y - a.y * b.x;
    const double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
    return std::atan2(cross, dot);
}

// Radial derivation of the kernel, with theta the geodesic distance from the
// source point. Requiring -Laplace G = delta - 1/(4 pi) means
//   (sin t G')' = sin t / (4 pi)   away from the pole,
// and matching the -ln(t)/(2 pi) pole fixes the integration constant:
//   sin t G' = (1 - cos t)/(4 pi) - 1/(2 pi)  =>  G' = -cot(t/2)/(4 pi),
//   G(t) = -ln(sin^2(t/2))/(4 pi) + c = -ln(1 - cos t)/(4 pi) + c'.
// The zero-mean condition integral G dA = 0 over the sphere gives
// c' = (ln 2 - 1)/(4 pi), using integral_0^pi ln(sin(t/2)) sin t dt = -1.
// With 1 - cos t = u/2 for squared chordal distance u, this is the form below.
double greens_from_chordal_sq(double chordal_sq) {
    if (chordal_sq < kSingularityFloor * kSingularityFloor) {
        throw SingularityError("coincident points: Green's kernel has a log pole");
    }
    return -std::log(0.5 * chordal_sq) / (4.0 * kPi) + (kLog2 - 1.0) / (4.0 * kPi);
}

double greens_fs(const SpherePoint& a, const SpherePoint& b) {
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return greens_from_chordal_sq(dx * dx + dy * dy + dz * dz);
}

SpherePoint random_sphere_point(Xoshiro256pp& rng) {
    for (;;) {
        double g0, g1, g2, g3;
        rng.next_normal_pair(g0, g1);
        rng.next_normal_pair(g2, g3); // g3 discarded; keeps draw count even
        const double norm = std::sqrt(g0 * g0 + g1 * g1 + g2 * g2);
        if (norm > 1e-300) return {g0 / norm, g1 / norm, g2 / norm};
    }
}

SpherePoint Rotation::apply(const SpherePoint& p) const {
    return {m[0][0] * p.x + m[0][1] * p.y + m[0][2] * p.z,
            m[1][0] * p.x + m[1][1] * p.y + m[1][2] * p.z,
            m[2][0] * p.x + m[2][1] * p.y + m[2][2] * p.z};
}

// Haar rotation from a uniform unit quaternion.
Rotation random_rotation(Xoshiro256pp& rng) {
    double q[4];
    double norm = 0.0;
    do {
        rng.next_normal_pair(q[0], q[1]);
        rng.next_normal_pair(q[2], q[3]);
        norm = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
    } while (norm < 1e-300);
    for (double& c : q) c /= norm;
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    Rotation rot;
    rot.m[0][0] = 1 - 2 * (y * y + z * z);
    rot.m[0][1] = 2 * (x * y - w * z);
    rot.m[0][2] = 2 * (x * z + w * y);
    rot.m[1][0] = 2 * (x * y + w * z);
    rot.m[1][1] = 1 - 2 * (x * x + z * z);
    rot.m[1][2] = 2 * (y * z - w * x);
    rot.m[2][0] = 2 * (x * z - w * y);
    rot.m[2][1] = 2 * (y * z + w * x);
    rot.m[2][2] = 1 - 2 * (x * x + y * y);
    return rot;
}

} // namespace randzeros
