#include "oamopo/geometric_phase.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

#include "oamopo/errors.hpp"

namespace oamopo {

namespace {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double length(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 scaled(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

Vec3 normalized(const Vec3& a) { return scaled(a, 1.0 / length(a)); }

std::vector<Vec3> unit_vectors(const SpherePath& path) {
  std::vector<Vec3> out;
  out.reserve(path.vertices.size());
  for (const SpherePoint& p : path.vertices) out.push_back(to_unit_vector(p));
  return out;
}

// Angular distance from p to the geodesic arc a -> b.
double distance_to_arc(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 n = cross(a, b);
  const double nn = length(n);
  const double endpoints = std::min(arc_length(p, a), arc_length(p, b));
  if (nn < 1e-15) return endpoints;
  const Vec3 unit_n = scaled(n, 1.0 / nn);
  const double off_plane = dot(p, unit_n);
  const Vec3 in_plane = add(p, scaled(unit_n, -off_plane));
  if (length(in_plane) < 1e-15) return 0.5 * kPi;
  const Vec3 foot = normalized(in_plane);
  if (std::abs(arc_length(a, foot) + arc_length(foot, b) - arc_length(a, b)) < 1e-9) {
    return std::asin(std::min(1.0, std::abs(off_plane)));
  }
  return endpoints;
}

// Signed area of the geodesic triangle (r, a, b) by l'Huilier's theorem.
double signed_triangle(const Vec3& r, const Vec3& a, const Vec3& b) {
  const double orientation = dot(r, cross(a, b));
  if (orientation == 0.0) return 0.0;
  const double sa = arc_length(a, b);
  const double sb = arc_length(r, b);
  const double sc = arc_length(r, a);
  const double s = 0.5 * (sa + sb + sc);
  const double t = std::tan(0.5 * s) * std::tan(0.5 * (s - sa)) * std::tan(0.5 * (s - sb)) *
                   std::tan(0.5 * (s - sc));
  const double excess = 4.0 * std::atan(std::sqrt(std::max(0.0, t)));
  return orientation > 0.0 ? excess : -excess;
}

// A fan reference whose antipode keeps clear of every arc.
Vec3 fan_reference(const std::vector<Vec3>& v) {
  std::vector<Vec3> candidates;
  Vec3 centroid{0.0, 0.0, 0.0};
  Vec3 area{0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < v.size(); ++k) {
    centroid = add(centroid, v[k]);
    area = add(area, cross(v[k], v[(k + 1) % v.size()]));
  }
  if (length(centroid) > 1e-6 * static_cast<double>(v.size())) candidates.push_back(normalized(centroid));
  if (length(area) > 1e-12) candidates.push_back(normalized(area));
  for (const Vec3& axis : {Vec3{0, 0, 1}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0.48, 0.6, 0.64}}) {
    candidates.push_back(axis);
  }
  Vec3 best = candidates.front();
  double best_clearance = -1.0;
  for (const Vec3& r : candidates) {
    const Vec3 antipode = scaled(r, -1.0);
    double clearance = kPi;
    for (std::size_t k = 0; k < v.size(); ++k) {
      clearance = std::min(clearance, distance_to_arc(antipode, v[k], v[(k + 1) % v.size()]));
    }
    if (clearance > 1e-3) return r;
    if (clearance > best_clearance) {
      best_clearance = clearance;
      best = r;
    }
  }
  return best;
}

}  // namespace

Vec3 to_unit_vector(SpherePoint point) {
  const double st = std::sin(point.theta);
  return {st * std::cos(point.phi), -st * std::sin(point.phi), std::cos(point.theta)};
}

SpherePoint from_unit_vector(const Vec3& v) {
  const Vec3 u = normalized(v);
  return sphere_from_stokes({u[0], u[1], u[2]});
}

double arc_length(const Vec3& a, const Vec3& b) { return std::atan2(length(cross(a, b)), dot(a, b)); }

Vec3 slerp(const Vec3& a, const Vec3& b, double t) {
  const double omega = arc_length(a, b);
  if (omega < 1e-12) return normalized(add(scaled(a, 1.0 - t), scaled(b, t)));
  const double so = std::sin(omega);
  return normalized(add(scaled(a, std::sin((1.0 - t) * omega) / so), scaled(b, std::sin(t * omega) / so)));
}

void SpherePath::validate() const {
  if (vertices.empty()) throw DomainError("path has no vertices");
  for (const SpherePoint& p : vertices) {
    if (!std::isfinite(p.theta) || !std::isfinite(p.phi)) throw DomainError("path vertex is not finite");
    if (p.theta < 0.0 || p.theta > kPi) throw DomainError("path vertex theta outside [0, pi]");
  }
  const std::vector<Vec3> v = unit_vectors(*this);
  if (closed) {
    constexpr double kSame = 1e-12;
    std::size_t second = v.size();
    for (std::size_t k = 1; k < v.size() && second == v.size(); ++k) {
      if (arc_length(v[0], v[k]) > kSame) second = k;
    }
    bool third = false;
    for (std::size_t k = second + 1; k < v.size() && !third; ++k) {
      third = arc_length(v[0], v[k]) > kSame && arc_length(v[second], v[k]) > kSame;
    }
    if (!third) throw DomainError("closed path needs at least three distinct vertices");
  }
  for (std::size_t k = 0; k < arc_count(); ++k) {
    if (arc_length(v[k], v[(k + 1) % v.size()]) > kPi - 1e-9) {
      throw DomainError("path arc " + std::to_string(k) + " joins (nearly) antipodal points");
    }
  }
}

std::size_t SpherePath::arc_count() const {
  if (vertices.empty()) return 0;
  return closed ? vertices.size() : vertices.size() - 1;
}

double SpherePath::length() const {
  const std::vector<Vec3> v = unit_vectors(*this);
  double total = 0.0;
  for (std::size_t k = 0; k < arc_count(); ++k) total += arc_length(v[k], v[(k + 1) % v.size()]);
  return total;
}

SpherePath lune_path(double dphi) {
  if (!(dphi > 0.0 && dphi < 2.0 * kPi)) throw DomainError("lune azimuth must lie in (0, 2pi)");
  SpherePath path;
  path.vertices = {{0.5 * kPi, 0.0}, {0.0, 0.0}, {0.5 * kPi, dphi}};
  const int equator_arcs = static_cast<int>(std::ceil(dphi / (0.5 * kPi) - 1e-12));
  for (int k = equator_arcs - 1; k >= 1; --k) {
    path.vertices.push_back({0.5 * kPi, dphi * k / equator_arcs});
  }
  return path;
}

SpherePath octant_path() { return lune_path(0.5 * kPi); }

SpherePath equator_path() {
  SpherePath path;
  for (int k = 0; k < 4; ++k) path.vertices.push_back({0.5 * kPi, 0.5 * kPi * k});
  return path;
}

SpherePath null_path() {
  SpherePath path;
  path.vertices = {{0.5 * kPi, 0.0}, {0.5 * kPi, 0.5}, {0.5 * kPi, 1.0}};
  return path;
}

SpherePath path_preset(std::string_view spec) {
  if (spec == "octant") return octant_path();
  if (spec == "equator") return equator_path();
  if (spec == "null") return null_path();
  constexpr std::string_view kLune = "lune:";
  if (spec.substr(0, kLune.size()) == kLune) {
    const std::string_view number = spec.substr(kLune.size());
    double dphi = 0.0;
    const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), dphi);
    if (ec != std::errc{} || ptr != number.data() + number.size()) {
      throw DomainError("bad lune azimuth in path preset '" + std::string(spec) + "'");
    }
    return lune_path(dphi);
  }
  throw DomainError("unknown path preset '" + std::string(spec) + "'");
}

SpherePath starting_at(const SpherePath& path, std::size_t index) {
  if (index >= path.vertices.size()) throw DomainError("start index outside the path");
  SpherePath out = path;
  std::rotate(out.vertices.begin(), out.vertices.begin() + static_cast<std::ptrdiff_t>(index), out.vertices.end());
  return out;
}

SpherePath reversed(const SpherePath& path) {
  SpherePath out = path;
  std::reverse(out.vertices.begin(), out.vertices.end());
  return out;
}

double solid_angle(const SpherePath& path) {
  if (!path.closed) throw DomainError("solid angle needs a closed path");
  path.validate();
  const std::vector<Vec3> v = unit_vectors(path);
  const Vec3 ref = fan_reference(v);
  double omega = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) omega += signed_triangle(ref, v[k], v[(k + 1) % v.size()]);
  omega -= 4.0 * kPi * std::round(omega / (4.0 * kPi));
  if (omega <= -2.0 * kPi + 1e-9) omega += 4.0 * kPi;
  return omega;
}

double wrap_angle(double angle) {
  double r = std::remainder(angle, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

PhaseValue geometric_phase(const SpherePath& path) {
  const double raw = -0.5 * solid_angle(path);
  return {raw, wrap_angle(raw)};
}

double berry_connection_phase(const SpherePath& path, int segments_per_arc) {
  if (segments_per_arc < 10) throw DomainError("berry_connection_phase needs at least 10 segments per arc");
  if (!path.closed) throw DomainError("berry_connection_phase needs a closed path");
  path.validate();
  const std::vector<Vec3> v = unit_vectors(path);
  std::vector<ModeVector> states;
  states.reserve(v.size() * static_cast<std::size_t>(segments_per_arc));
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Vec3& a = v[k];
    const Vec3& b = v[(k + 1) % v.size()];
    for (int j = 0; j < segments_per_arc; ++j) {
      const double t = static_cast<double>(j) / segments_per_arc;
      states.push_back(mode_from_sphere(from_unit_vector(slerp(a, b, t)), 1.0));
    }
  }
  double total = 0.0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    total += std::arg(inner(states[k], states[(k + 1) % states.size()]));
  }
  return wrap_angle(total);
}

SpherePath mirror_path(const SpherePath& path) {
  SpherePath out = path;
  for (SpherePoint& p : out.vertices) p.theta = kPi - p.theta;
  return out;
}

ConjugationPair conjugation_pair(const SpherePath& path) {
  ConjugationPair out;
  out.signal = geometric_phase(path);
  out.idler = geometric_phase(mirror_path(path));
  out.relative = out.idler.raw - out.signal.raw;
  if (std::abs(wrap_angle(out.idler.raw + out.signal.raw)) > 1e-9) {
    throw std::logic_error("mirror path failed to conjugate the geometric phase");
  }
  return out;
}

}  // namespace oamopo
