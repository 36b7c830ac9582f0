#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "randzeros/rng.hpp"
#include "randzeros/rootfind.hpp"

namespace randzeros {

struct SpherePoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

struct ConfigurationSource {
    RandomSeed seed;
    int degree = 0;
};

// N points on the unit sphere; the object all energies consume.
struct SphereConfiguration {
    std::vector<SpherePoint> points;
    std::optional<ConfigurationSource> source;
};

// Pair distances below this are treated as a degenerate configuration.
inline constexpr double kSingularityFloor = 1e-12;

// Inverse stereographic projection from the north pole:
//   z = u + iv  ->  (2u, 2v, |z|^2 - 1) / (|z|^2 + 1),   infinity -> (0,0,1).
// For |z| > 1 the map is evaluated through w = 1/z to avoid overflow.
SpherePoint to_sphere(std::complex<double> z);
SpherePoint to_sphere(const ProjectiveRoot& root);
SpherePoint north_pole();

// Projects every root of the set; size equals the degree.
SphereConfiguration configuration_from_roots(const RootSet& roots,
                                             std::optional<ConfigurationSource> source = {});

// Straight-line distance in R^3, range [0, 2].
double chordal(const SpherePoint& a, const SpherePoint& b);

// Geodesic distance, range [0, pi]; atan2 form, stable near 0 and pi.
double round_distance(const SpherePoint& a, const SpherePoint& b);

// Green's function of -Laplace on the unit sphere, zero-mean normalized:
//   G(a,b) = -ln(1 - cos r)/(4 pi) + (ln 2 - 1)/(4 pi),  r = round_distance.
// Throws SingularityError when the pair sits below the singularity floor.
double greens_fs(const SpherePoint& a, const SpherePoint& b);

// Same kernel as a function of the squared chordal distance u = [a,b]^2
// (1 - cos r = u/2). Shared implementation detail of greens_fs, exposed so
// pairwise sweeps can reuse an already-computed distance.
double greens_from_chordal_sq(double chordal_sq);

// Uniform random point (normalized Gaussian triple).
SpherePoint random_sphere_point(Xoshiro256pp& rng);

// Haar-random rotation applied to a point; used by invariance tests.
struct Rotation {
    double m[3][3];
    SpherePoint apply(const SpherePoint& p) const;
};
Rotation random_rotation(Xoshiro256pp& rng);

} // namespace randzeros
