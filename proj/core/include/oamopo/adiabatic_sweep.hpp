#pragma once

#include <vector>

#include "oamopo/geometric_phase.hpp"
#include "oamopo/opo_dynamics.hpp"
#include "oamopo/steady_state.hpp"

namespace oamopo {

/// Constant-speed parametrisation of a SpherePath for driving the seed.
///
/// The seed gauge e^{-+i phi/2} must stay continuous in time, so the azimuth is
/// unwrapped along the path. Where the path touches a pole the ray does not
/// move while the azimuth turns from the arrival meridian to the departure
/// meridian; that turn is swept in place and counted as path length equal to
/// the azimuth change. The turn equals the difference of the literal azimuths
/// of the neighbouring vertices, so a lune returns to its starting gauge.
class PathSchedule {
 public:
  explicit PathSchedule(const SpherePath& path);

  /// Seed coordinates at fraction f in [0, 1] of the schedule. phi is the
  /// continuous (unwrapped) azimuth and may leave (-pi, pi].
  SpherePoint at(double fraction) const;

  /// Arc length plus in-place azimuth turns.
  double length() const { return total_; }

 private:
  struct Segment {
    bool dwell = false;
    Vec3 from{};
    Vec3 to{};
    double theta = 0.0;        // dwell: pole polar angle
    double phi_start = 0.0;    // continuous azimuth at the segment start
    double phi_raw_start = 0.0;
    double meridian = 0.0;     // arc: raw azimuth used where the arc touches a pole
    double turn = 0.0;         // dwell: azimuth change
    double begin = 0.0;        // cumulative length at segment start
    double length = 0.0;
  };

  std::vector<Segment> segments_;
  SpherePoint start_{};
  double total_ = 0.0;
};

struct SweepSchedule {
  SpherePath path;
  double duration = 200.0;  ///< T, in the time unit of params (1/kappa when kappa = 1)
  int samples = 201;
  double seed_intensity = 0.04;
  OpoParams params{};
  double pump_in = 0.5;
  double dt = 0.02;
  /// T * kappa at or above which the sweep counts as adiabatic.
  double adiabatic_threshold = 100.0;

  bool adiabatic() const { return duration * params.kappa >= adiabatic_threshold; }
};

struct SweepRecord {
  std::vector<double> times;
  std::vector<SpherePoint> injected;
  std::vector<FiveModeState> states;
  std::vector<FiveModeState> steady;
  std::vector<StokesVector> signal_stokes;
  std::vector<StokesVector> idler_stokes;
  double adiabaticity_error = 0.0;
  bool adiabatic = false;
};

/// Integrates the LG-basis equations with seed(t) = mode_from_sphere(schedule
/// point at t/T, I_s^in), starting from the injected steady state at the first
/// vertex. Throws DomainError when the operating point is not stable and
/// NumericalError (carrying the failure time) when the integration diverges.
SweepRecord run_sweep(const SweepSchedule& schedule);

/// max_k |state_k - steady_k| / |steady_k| over the five complex amplitudes.
double adiabaticity_error(const SweepRecord& record);

/// max over samples of |p1s - p1i|, |p2s - p2i|, |p3s + p3i|.
double mirror_error(const SweepRecord& record);

/// Largest change of any amplitude magnitude between the first and last
/// sample, relative to the norm of the first state.
double closure_error(const SweepRecord& record);

/// Predicted signal-idler relative phase increment after the cycle: the solid
/// angle of the path. The mean-field record certifies adiabatic mirror
/// tracking; the phase itself comes from the geometry. Throws DomainError for
/// open paths.
double relative_phase_after_cycle(const SweepRecord& record, const SpherePath& path);

}  // namespace oamopo
