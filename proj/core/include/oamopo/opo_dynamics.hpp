#pragma once

#include <functional>
#include <vector>

#include "oamopo/mode_algebra.hpp"

namespace oamopo {

/// Cavity and crystal constants. Rates are in 1/time, chi in 1/(time * field).
struct OpoParams {
  double kappa_p = 1.0;  ///< pump damping
  double kappa = 1.0;    ///< common signal/idler damping
  double delta_p = 0.0;  ///< pump detuning
  double delta = 0.0;    ///< signal/idler detuning
  double chi = 1.0;      ///< nonlinear coupling
  double eta_p = 1.0;    ///< pump input coupling
  double eta_s = 1.0;    ///< seed input coupling

  /// Input couplings from mirror transmissions and round-trip times,
  /// eta_j = sqrt(T_j) / tau_j.
  static double input_coupling(double transmission, double round_trip);

  /// Throws DomainError unless kappa_p, kappa, chi, eta_p, eta_s are positive
  /// and every field is finite.
  void validate() const;
  bool resonant() const { return delta == 0.0 && delta_p == 0.0; }
  /// Clipping amplitude kappa/chi.
  double clip() const { return kappa / chi; }
  /// Fastest linear rate, used by the step-size guard.
  double max_rate() const;
  friend bool operator==(const OpoParams&, const OpoParams&) = default;
};

/// Intracavity amplitudes in the LG basis.
struct FiveModeState {
  Complex pump{};
  ModeVector signal{};
  ModeVector idler{};

  FiveModeState& operator+=(const FiveModeState& o);
  friend FiveModeState operator+(FiveModeState a, const FiveModeState& b) { return a += b; }
  friend FiveModeState operator-(const FiveModeState& a, const FiveModeState& b);
  friend FiveModeState operator*(double s, const FiveModeState& v);

  /// Euclidean norm over the five complex amplitudes.
  double norm() const;
  bool finite() const;
};

/// Amplitudes in the basis aligned with the injected seed. Only the unprimed
/// signal mode is driven; the primed pair is undriven.
struct RotatedState {
  Complex pump{};
  Complex signal{};
  Complex idler{};
  Complex signal_prime{};
  Complex idler_prime{};

  double norm() const;
};

struct InjectionDrive {
  Complex pump_in{};    ///< alpha_p^in; its argument is theta_p^in
  ModeVector seed{};    ///< alpha_{+-}^{s(in)}; |seed|^2 is the seed intensity
};

using DriveSchedule = std::function<InjectionDrive(double t)>;

/// Time derivative of the five coupled-mode equations in the LG basis.
FiveModeState rhs_lg_basis(const FiveModeState& state, const OpoParams& params, const InjectionDrive& drive);

/// Unitary change to the injection-aligned basis of a seed at `point`.
/// Signal and idler use different matrices; the idler rows are ordered
/// (sin, cos) / (cos, -sin) so that the idler partner of the driven signal
/// mode is the unprimed idler.
RotatedState to_rotated_basis(const FiveModeState& state, SpherePoint point);
FiveModeState from_rotated_basis(const RotatedState& state, SpherePoint point);

/// Derivative in the rotated basis with a single real injection term
/// eta_s * seed_amplitude on the unprimed signal. The pump couples to
/// alpha_s alpha_i + alpha_s' alpha_i'.
RotatedState rhs_rotated(const RotatedState& state, const OpoParams& params, Complex pump_in,
                         double seed_amplitude);

/// One classical RK4 step from t to t + h.
FiveModeState rk4_step(const FiveModeState& state, double t, double h, const OpoParams& params,
                       const DriveSchedule& drive);

struct IntegrationOptions {
  double t_end = 0.0;
  double dt = 0.01;
  int stride = 1;  ///< keep every stride-th step (t = 0 and t_end always kept)
};

struct TrajectorySample {
  double t = 0.0;
  FiveModeState state{};
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  const FiveModeState& final_state() const { return samples.back().state; }
  double final_time() const { return samples.back().t; }
};

/// Fixed-step RK4 from t = 0 to options.t_end. The step is shrunk slightly so
/// that t_end is hit exactly.
///
/// Throws DomainError when dt <= 0 or dt * params.max_rate() >= 0.1, and
/// NumericalError as soon as a state becomes non-finite or exceeds 1e150.
Trajectory integrate(const FiveModeState& initial, const OpoParams& params, const DriveSchedule& drive,
                     const IntegrationOptions& options);

/// Constant drive helper.
DriveSchedule constant_drive(InjectionDrive drive);

/// Deterministic start for free-running runs: signal amplitudes +amplitude,
/// idler amplitudes -amplitude, pump zero. This lies on the parametrically
/// amplified manifold (alpha_s = -alpha_i*) so the oscillation builds up.
FiveModeState tiny_seed_state(double amplitude = 1e-8);

}  // namespace oamopo
