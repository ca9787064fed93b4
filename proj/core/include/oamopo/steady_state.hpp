#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "oamopo/mode_algebra.hpp"
#include "oamopo/opo_dynamics.hpp"

namespace oamopo {

/// Coefficients of the pump-amplitude characteristic polynomial
///   b^2 x + (x - a)(x - clip)^2 (x + clip)^2 = 0,
/// with a = eta_p |alpha_p^in| / kappa_p, b = eta_s kappa sqrt(I_s^in) / (chi sqrt(kappa kappa_p))
/// and clip = kappa / chi. All three are in field units.
struct QuinticCoeffs {
  double a = 0.0;
  double b = 0.0;
  double clip = 1.0;

  static QuinticCoeffs from_drive(const OpoParams& params, double pump_in, double seed_intensity);

  /// Monomial coefficients, highest power first.
  std::array<double, 6> monomials() const;
  double value(double x) const;
  /// Sum of |c_k| |x|^k; the natural magnitude against which a residual is judged.
  double magnitude(double x) const;
};

/// Non-negative real roots (with multiplicity) in ascending order. Found as
/// companion-matrix eigenvalues and polished with Newton iterations.
std::vector<double> quintic_real_roots(const QuinticCoeffs& q);

struct StableRoot {
  double value = 0.0;
  /// b = 0 above threshold: the pump sits at the free-running clipping value.
  bool free_running_clip = false;
  /// Number of distinct roots strictly below clip (more than one is reported
  /// as a diagnostic; the largest is taken).
  int sub_clip_candidates = 0;
};

/// Largest root strictly below clip. With b = 0 and a >= clip the physical
/// solution is the clipped pump, returned with free_running_clip set.
StableRoot select_stable(std::span<const double> roots, const QuinticCoeffs& q);

/// Pump input amplitude at the oscillation threshold, kappa_p kappa / (eta_p chi).
double threshold(const OpoParams& params);

/// Conversions between drive amplitudes and the (a, b) coordinates.
double pump_in_for_a(const OpoParams& params, double a);
double seed_intensity_for_b(const OpoParams& params, double b);

struct SteadySolution {
  RotatedState rotated{};   ///< primed amplitudes are zero
  SpherePoint basis_point{};
  bool stable = false;      ///< |alpha_p| < kappa/chi
  StableRoot root{};

  FiveModeState lg_state() const { return from_rotated_basis(rotated, basis_point); }
};

/// Resonant injected steady state with alpha_p^in and sqrt(I_s^in) real and
/// positive:
///   alpha_s = eta_s kappa sqrt(I) / (kappa^2 - chi^2 |alpha_p|^2)
///   alpha_i = -eta_s chi sqrt(I) alpha_p / (kappa^2 - chi^2 |alpha_p|^2)
/// with |alpha_p| from select_stable. A zero seed falls back to the free-running
/// solution aligned with `point`.
///
/// Throws DomainError for non-zero detuning or negative drives.
SteadySolution injected_steady(const OpoParams& params, double pump_in, double seed_intensity, SpherePoint point);

/// Free-running stationary family.
struct FreeRunFamily {
  double pump_intensity = 0.0;  ///< I_p = |alpha_p|^2
  double total = 0.0;           ///< I_s = I_i = A^2 + B^2
  double a_amp = 0.0;           ///< A = |alpha_s+| = |alpha_i-|
  double b_amp = 0.0;           ///< B = |alpha_s-| = |alpha_i+|
  double delta_theta = 0.0;     ///< theta_s+ - theta_s-
};

struct FreeRunSteady {
  FreeRunFamily family;
  FiveModeState state;
  bool above_threshold = false;
};

/// Free-running (no seed) steady state at resonance with a real pump drive.
/// Above threshold: I_p = (kappa/chi)^2 and I_s = (kappa_p/chi)(a - kappa/chi),
/// split as A^2 = a_fraction I_s, B^2 = (1 - a_fraction) I_s. The signal phases
/// are +-delta_theta/2 and the idler follows alpha_i-+ = -conj(alpha_s+-).
FreeRunSteady free_running_steady(const OpoParams& params, double pump_in, double a_fraction, double delta_theta);

/// Stokes vectors of signal and idler for stable injection at `point`.
std::pair<StokesVector, StokesVector> downconverted_stokes(SpherePoint point);

}  // namespace oamopo
