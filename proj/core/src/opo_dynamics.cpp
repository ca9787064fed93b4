#include "oamopo/opo_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oamopo/errors.hpp"

namespace oamopo {

namespace {

struct BasisCoefficients {
  double c;   // cos(theta/2)
  double s;   // sin(theta/2)
  Complex e;  // e^{i phi/2}
};

BasisCoefficients basis(SpherePoint point) {
  return {std::cos(0.5 * point.theta), std::sin(0.5 * point.theta), std::polar(1.0, 0.5 * point.phi)};
}

constexpr double kOverflow = 1e150;

}  // namespace

double OpoParams::input_coupling(double transmission, double round_trip) {
  if (!(transmission >= 0.0) || !(round_trip > 0.0)) {
    throw DomainError("input coupling needs T >= 0 and tau > 0");
  }
  return std::sqrt(transmission) / round_trip;
}

void OpoParams::validate() const {
  for (double v : {kappa_p, kappa, delta_p, delta, chi, eta_p, eta_s}) {
    if (!std::isfinite(v)) throw DomainError("OPO parameters must be finite");
  }
  if (!(kappa_p > 0.0 && kappa > 0.0)) throw DomainError("damping rates must be positive");
  if (!(chi > 0.0)) throw DomainError("nonlinear coupling chi must be positive");
  if (!(eta_p > 0.0 && eta_s > 0.0)) throw DomainError("input couplings must be positive");
}

double OpoParams::max_rate() const {
  return std::max({kappa_p, kappa, std::abs(delta), std::abs(delta_p)});
}

FiveModeState& FiveModeState::operator+=(const FiveModeState& o) {
  pump += o.pump;
  signal += o.signal;
  idler += o.idler;
  return *this;
}

FiveModeState operator-(const FiveModeState& a, const FiveModeState& b) {
  return {a.pump - b.pump, a.signal - b.signal, a.idler - b.idler};
}

FiveModeState operator*(double s, const FiveModeState& v) { return {s * v.pump, s * v.signal, s * v.idler}; }

double FiveModeState::norm() const {
  return std::sqrt(std::norm(pump) + signal.intensity() + idler.intensity());
}

bool FiveModeState::finite() const {
  for (const Complex& z : {pump, signal.plus, signal.minus, idler.plus, idler.minus}) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    if (std::abs(z.real()) > kOverflow || std::abs(z.imag()) > kOverflow) return false;
  }
  return true;
}

double RotatedState::norm() const {
  return std::sqrt(std::norm(pump) + std::norm(signal) + std::norm(idler) + std::norm(signal_prime) +
                   std::norm(idler_prime));
}

FiveModeState rhs_lg_basis(const FiveModeState& x, const OpoParams& p, const InjectionDrive& drive) {
  const Complex pump_loss{p.kappa_p, p.delta_p};
  const Complex loss{p.kappa, p.delta};
  FiveModeState d;
  d.pump = -pump_loss * x.pump + p.chi * (x.signal.plus * x.idler.minus + x.signal.minus * x.idler.plus) +
           p.eta_p * drive.pump_in;
  d.signal.plus = -loss * x.signal.plus - p.chi * std::conj(x.idler.minus) * x.pump + p.eta_s * drive.seed.plus;
  d.signal.minus = -loss * x.signal.minus - p.chi * std::conj(x.idler.plus) * x.pump + p.eta_s * drive.seed.minus;
  d.idler.plus = -loss * x.idler.plus - p.chi * std::conj(x.signal.minus) * x.pump;
  d.idler.minus = -loss * x.idler.minus - p.chi * std::conj(x.signal.plus) * x.pump;
  return d;
}

RotatedState to_rotated_basis(const FiveModeState& x, SpherePoint point) {
  const auto [c, s, e] = basis(point);
  const Complex ec = std::conj(e);
  RotatedState r;
  r.pump = x.pump;
  r.signal = c * e * x.signal.plus + s * ec * x.signal.minus;
  r.signal_prime = -s * e * x.signal.plus + c * ec * x.signal.minus;
  r.idler = s * e * x.idler.plus + c * ec * x.idler.minus;
  r.idler_prime = c * e * x.idler.plus - s * ec * x.idler.minus;
  return r;
}

FiveModeState from_rotated_basis(const RotatedState& r, SpherePoint point) {
  const auto [c, s, e] = basis(point);
  const Complex ec = std::conj(e);
  FiveModeState x;
  x.pump = r.pump;
  x.signal.plus = c * ec * r.signal - s * ec * r.signal_prime;
  x.signal.minus = s * e * r.signal + c * e * r.signal_prime;
  x.idler.plus = s * ec * r.idler + c * ec * r.idler_prime;
  x.idler.minus = c * e * r.idler - s * e * r.idler_prime;
  return x;
}

RotatedState rhs_rotated(const RotatedState& x, const OpoParams& p, Complex pump_in, double seed_amplitude) {
  const Complex pump_loss{p.kappa_p, p.delta_p};
  const Complex loss{p.kappa, p.delta};
  RotatedState d;
  d.pump = -pump_loss * x.pump + p.chi * (x.signal * x.idler + x.signal_prime * x.idler_prime) + p.eta_p * pump_in;
  d.signal = -loss * x.signal - p.chi * std::conj(x.idler) * x.pump + p.eta_s * seed_amplitude;
  d.idler = -loss * x.idler - p.chi * std::conj(x.signal) * x.pump;
  d.signal_prime = -loss * x.signal_prime - p.chi * std::conj(x.idler_prime) * x.pump;
  d.idler_prime = -loss * x.idler_prime - p.chi * std::conj(x.signal_prime) * x.pump;
  return d;
}

FiveModeState rk4_step(const FiveModeState& x, double t, double h, const OpoParams& params,
                       const DriveSchedule& drive) {
  const InjectionDrive d0 = drive(t);
  const InjectionDrive dm = drive(t + 0.5 * h);
  const InjectionDrive d1 = drive(t + h);
  const FiveModeState k1 = rhs_lg_basis(x, params, d0);
  const FiveModeState k2 = rhs_lg_basis(x + (0.5 * h) * k1, params, dm);
  const FiveModeState k3 = rhs_lg_basis(x + (0.5 * h) * k2, params, dm);
  const FiveModeState k4 = rhs_lg_basis(x + h * k3, params, d1);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Trajectory integrate(const FiveModeState& initial, const OpoParams& params, const DriveSchedule& drive,
                     const IntegrationOptions& options) {
  params.validate();
  if (!(options.dt > 0.0)) throw DomainError("integration step must be positive");
  if (!(options.t_end >= 0.0)) throw DomainError("integration end time must be non-negative");
  if (options.dt * params.max_rate() >= 0.1) {
    throw DomainError("step guard violated: dt * max rate = " + std::to_string(options.dt * params.max_rate()) +
                      " (must be < 0.1)");
  }
  if (options.stride < 1) throw DomainError("sample stride must be >= 1");
  if (!initial.finite()) throw NumericalError("initial state is not finite", 0.0);

  const auto steps = static_cast<long long>(std::ceil(options.t_end / options.dt - 1e-9));
  const double h = steps > 0 ? options.t_end / static_cast<double>(steps) : 0.0;

  Trajectory out;
  out.samples.reserve(static_cast<std::size_t>(steps / options.stride + 2));
  out.samples.push_back({0.0, initial});
  FiveModeState x = initial;
  for (long long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * h;
    x = rk4_step(x, t, h, params, drive);
    const double t_next = static_cast<double>(k + 1) * h;
    if (!x.finite()) {
      throw NumericalError("integration diverged; reduce dt or check parameters", t_next);
    }
    if ((k + 1) % options.stride == 0 || k + 1 == steps) out.samples.push_back({t_next, x});
  }
  return out;
}

DriveSchedule constant_drive(InjectionDrive drive) {
  return [drive](double) { return drive; };
}

FiveModeState tiny_seed_state(double amplitude) {
  return {Complex{}, ModeVector{amplitude, amplitude}, ModeVector{-amplitude, -amplitude}};
}

}  // namespace oamopo
