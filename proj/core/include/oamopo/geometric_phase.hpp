#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "oamopo/mode_algebra.hpp"

namespace oamopo {

using Vec3 = std::array<double, 3>;

/// Cartesian point on the mode sphere. The axes are the Stokes parameters,
/// (sin t cos p, -sin t sin p, cos t), so to_unit_vector(pt) equals
/// stokes_from_mode(mode_from_sphere(pt, I)).
Vec3 to_unit_vector(SpherePoint point);
SpherePoint from_unit_vector(const Vec3& v);

/// Great-circle distance between two unit vectors.
double arc_length(const Vec3& a, const Vec3& b);

/// Point a fraction t along the geodesic from a to b.
Vec3 slerp(const Vec3& a, const Vec3& b, double t);

/// Ordered vertex list joined by geodesic arcs. A closed path returns from the
/// last vertex to the first; the first vertex is not repeated.
struct SpherePath {
  std::vector<SpherePoint> vertices;
  bool closed = true;

  /// Arcs must be shorter than pi (no antipodal neighbours). Closed paths also
  /// need at least three distinct vertices. Throws DomainError.
  void validate() const;
  /// Number of arcs (vertices for a closed path, vertices - 1 otherwise).
  std::size_t arc_count() const;
  /// Total geodesic length.
  double length() const;
};

/// Lune bounded by the meridians at azimuth 0 and dphi and the equator.
/// Starts on the equator at azimuth 0, climbs to LG+, descends along azimuth
/// dphi and returns along the equator (extra equator vertices keep every arc
/// below pi/2). Encloses solid angle dphi.
SpherePath lune_path(double dphi);
/// The lune with dphi = pi/2 (one octant), same orientation.
SpherePath octant_path();
/// Equator traversed with increasing azimuth.
SpherePath equator_path();
/// Out-and-back along the equator; encloses nothing.
SpherePath null_path();

/// "lune:DPHI", "octant", "equator" or "null". Throws DomainError.
SpherePath path_preset(std::string_view spec);

/// Same closed loop started at vertex `index`.
SpherePath starting_at(const SpherePath& path, std::size_t index);
SpherePath reversed(const SpherePath& path);

/// Signed solid angle enclosed by a closed path, counterclockwise positive
/// when viewed from outside. Computed as a fan of l'Huilier triangles from a
/// reference direction and reduced to the representative in (-2pi, 2pi].
double solid_angle(const SpherePath& path);

struct PhaseValue {
  double raw = 0.0;      ///< -Omega/2 with Omega from solid_angle
  double wrapped = 0.0;  ///< raw reduced to (-pi, pi]
};

/// Geometric phase -Omega/2.
PhaseValue geometric_phase(const SpherePath& path);

/// Discrete Pancharatnam phase sum_k arg<psi_k|psi_{k+1}> over the densely
/// sampled loop, with psi = mode_from_sphere. Result in (-pi, pi].
double berry_connection_phase(const SpherePath& path, int segments_per_arc);

/// Reflection through the equator, (theta, phi) -> (pi - theta, phi).
SpherePath mirror_path(const SpherePath& path);

struct ConjugationPair {
  PhaseValue signal;
  PhaseValue idler;
  double relative = 0.0;  ///< idler.raw - signal.raw = Omega
};

/// Signal follows `path`, idler follows its mirror image.
ConjugationPair conjugation_pair(const SpherePath& path);

/// Reduce an angle to (-pi, pi].
double wrap_angle(double angle);

}  // namespace oamopo
