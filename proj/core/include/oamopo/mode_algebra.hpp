#pragma once

#include <complex>

namespace oamopo {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// A first-order transverse field written in the LG+/LG- basis.
///
/// The global phase is physically irrelevant for Stokes parameters but is kept
/// exactly, because interference between beams depends on it.
struct ModeVector {
  Complex plus{};
  Complex minus{};

  double intensity() const { return std::norm(plus) + std::norm(minus); }

  ModeVector& operator+=(const ModeVector& o) {
    plus += o.plus;
    minus += o.minus;
    return *this;
  }
  friend ModeVector operator+(ModeVector a, const ModeVector& b) { return a += b; }
  friend ModeVector operator-(const ModeVector& a, const ModeVector& b) {
    return {a.plus - b.plus, a.minus - b.minus};
  }
  friend ModeVector operator*(Complex s, const ModeVector& v) { return {s * v.plus, s * v.minus}; }
  friend ModeVector operator*(double s, const ModeVector& v) { return {s * v.plus, s * v.minus}; }
};

/// <a|b>, antilinear in the first argument.
inline Complex inner(const ModeVector& a, const ModeVector& b) {
  return std::conj(a.plus) * b.plus + std::conj(a.minus) * b.minus;
}

struct StokesVector {
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 0.0;

  double norm() const;
};

/// Point on the mode Poincare sphere. theta is the polar angle measured from
/// LG+ (north pole). phi is nominally in (-pi, pi]; values outside that range
/// are accepted by mode_from_sphere and select a different seed gauge
/// (phi and phi + 2pi give seeds of opposite sign).
struct SpherePoint {
  double theta = 0.0;
  double phi = 0.0;
};

/// Square sampling grid centred on the beam axis. half_width is in units of
/// the waist, so the physical half-extent is half_width * waist.
struct GridSpec {
  int n = 256;
  double half_width = 3.0;
  double waist = 1.0;

  void validate() const;
  double pitch() const { return 2.0 * half_width * waist / n; }
  /// Physical coordinate of pixel centre `index` along either axis.
  double coordinate(int index) const { return (index - 0.5 * (n - 1)) * pitch(); }
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Analyzer modes entering the intensity definition of the Stokes parameters.
enum class Analyzer { HG0, HG45, HG90, HG135, LGPlus, LGMinus };

/// Waist-plane LG_0^{+-1} profile, unit-normalised over the plane:
/// N (rho/w) exp(+-i azimuth) exp(-rho^2/w^2), N = 2/(w sqrt(pi)).
Complex lg_field(int sign, double x, double y, double waist);
Complex lg_field(int sign, double x, double y, const GridSpec& grid);

/// First-order HG mode labelled by `angle`:
///   HG_angle = (e^{+i angle} psi_+ + e^{-i angle} psi_-) / sqrt(2).
/// Its lobes lie along azimuth -angle (nodal line along -angle + pi/2), i.e.
/// the label is a rotation angle measured with the camera y axis pointing
/// down. This convention reproduces p2 = -sin(theta) sin(phi) for the seed
/// parametrisation used by mode_from_sphere.
Complex hg_field(double angle, double x, double y, const GridSpec& grid);

/// LG-basis coefficients of the analyzer mode.
ModeVector analyzer_mode(Analyzer analyzer);

/// |<analyzer|v>|^2.
double project_intensity(const ModeVector& v, Analyzer analyzer);

/// Coherence form: p1 = 2 Re(c+ c-*)/I, p2 = 2 Im(c+ c-*)/I, p3 = (|c+|^2 - |c-|^2)/I.
/// Throws DomainError for zero intensity.
StokesVector stokes_from_mode(const ModeVector& v);

/// Ratios of analyzer intensities (HG0 vs HG90, HG45 vs HG135, LG+ vs LG-).
/// Agrees with stokes_from_mode; kept as an independent route.
StokesVector stokes_from_projections(const ModeVector& v);

/// c+ = sqrt(I) cos(theta/2) e^{-i phi/2}, c- = sqrt(I) sin(theta/2) e^{+i phi/2}.
ModeVector mode_from_sphere(SpherePoint point, double intensity);

/// theta = arccos(p3), phi = atan2(-p2, p1); phi = 0 at the poles.
/// Throws DomainError unless |s| = 1 within 1e-9.
SpherePoint sphere_from_stokes(const StokesVector& s);

}  // namespace oamopo
