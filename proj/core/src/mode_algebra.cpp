#include "oamopo/mode_algebra.hpp"

#include <cmath>
#include <string>

#include "oamopo/errors.hpp"

namespace oamopo {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

ModeVector hg_analyzer(double angle) {
  return {kInvSqrt2 * std::polar(1.0, angle), kInvSqrt2 * std::polar(1.0, -angle)};
}

}  // namespace

double StokesVector::norm() const { return std::sqrt(p1 * p1 + p2 * p2 + p3 * p3); }

void GridSpec::validate() const {
  if (n < 16) throw DomainError("grid must have at least 16 pixels per side, got " + std::to_string(n));
  if (!(half_width > 0.0)) throw DomainError("grid half_width must be positive");
  if (!(waist > 0.0)) throw DomainError("beam waist must be positive");
}

Complex lg_field(int sign, double x, double y, double waist) {
  const double norm = 2.0 / (waist * std::sqrt(kPi));
  const double r2 = (x * x + y * y) / (waist * waist);
  // (rho/w) e^{+-i azimuth} = (x +- i y)/w, finite on the axis.
  const Complex helical{x / waist, (sign >= 0 ? y : -y) / waist};
  return norm * helical * std::exp(-r2);
}

Complex lg_field(int sign, double x, double y, const GridSpec& grid) {
  return lg_field(sign, x, y, grid.waist);
}

Complex hg_field(double angle, double x, double y, const GridSpec& grid) {
  const ModeVector c = hg_analyzer(angle);
  return c.plus * lg_field(+1, x, y, grid) + c.minus * lg_field(-1, x, y, grid);
}

ModeVector analyzer_mode(Analyzer analyzer) {
  switch (analyzer) {
    case Analyzer::HG0: return hg_analyzer(0.0);
    case Analyzer::HG45: return hg_analyzer(0.25 * kPi);
    case Analyzer::HG90: return hg_analyzer(0.5 * kPi);
    case Analyzer::HG135: return hg_analyzer(0.75 * kPi);
    case Analyzer::LGPlus: return {1.0, 0.0};
    case Analyzer::LGMinus: return {0.0, 1.0};
  }
  return {};
}

double project_intensity(const ModeVector& v, Analyzer analyzer) {
  return std::norm(inner(analyzer_mode(analyzer), v));
}

StokesVector stokes_from_mode(const ModeVector& v) {
  const double total = v.intensity();
  if (!(total > 0.0)) throw DomainError("Stokes parameters undefined for a zero-intensity mode");
  const Complex coherence = v.plus * std::conj(v.minus);
  return {2.0 * coherence.real() / total, 2.0 * coherence.imag() / total,
          (std::norm(v.plus) - std::norm(v.minus)) / total};
}

StokesVector stokes_from_projections(const ModeVector& v) {
  if (!(v.intensity() > 0.0)) throw DomainError("Stokes parameters undefined for a zero-intensity mode");
  auto ratio = [&v](Analyzer a, Analyzer b) {
    const double ia = project_intensity(v, a);
    const double ib = project_intensity(v, b);
    return (ia - ib) / (ia + ib);
  };
  return {ratio(Analyzer::HG0, Analyzer::HG90), ratio(Analyzer::HG45, Analyzer::HG135),
          ratio(Analyzer::LGPlus, Analyzer::LGMinus)};
}

ModeVector mode_from_sphere(SpherePoint point, double intensity) {
  if (intensity < 0.0) throw DomainError("mode intensity must be non-negative");
  const double amp = std::sqrt(intensity);
  return {amp * std::cos(0.5 * point.theta) * std::polar(1.0, -0.5 * point.phi),
          amp * std::sin(0.5 * point.theta) * std::polar(1.0, 0.5 * point.phi)};
}

SpherePoint sphere_from_stokes(const StokesVector& s) {
  if (std::abs(s.norm() - 1.0) > 1e-9) {
    throw DomainError("sphere_from_stokes needs a unit Stokes vector, |s| = " + std::to_string(s.norm()));
  }
  const double transverse = std::hypot(s.p1, s.p2);
  const double theta = std::atan2(transverse, s.p3);
  if (transverse < 1e-15) return {theta, 0.0};
  double phi = std::atan2(-s.p2, s.p1);
  if (phi <= -kPi) phi = kPi;
  return {theta, phi};
}

}  // namespace oamopo
