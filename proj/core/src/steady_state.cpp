#include "oamopo/steady_state.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "oamopo/errors.hpp"

namespace oamopo {

namespace {

constexpr int kNewtonIterations = 60;

double derivative(const std::array<double, 6>& c, double x) {
  double d = 0.0;
  for (int k = 0; k < 5; ++k) d = d * x + (5 - k) * c[static_cast<std::size_t>(k)];
  return d;
}

double polish(const QuinticCoeffs& q, double x) {
  const auto c = q.monomials();
  for (int it = 0; it < kNewtonIterations; ++it) {
    const double f = q.value(x);
    const double df = derivative(c, x);
    if (f == 0.0 || df == 0.0) break;
    const double step = f / df;
    const double next = x - step;
    // Accept only steps that do not increase the residual; near a double root
    // Newton is merely linear and can wander once rounding dominates.
    if (std::abs(q.value(next)) > std::abs(f)) break;
    x = next;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

void require_resonant(const OpoParams& params) {
  if (!params.resonant()) {
    throw DomainError("steady states are only available at resonance (delta = delta_p = 0)");
  }
}

}  // namespace

QuinticCoeffs QuinticCoeffs::from_drive(const OpoParams& params, double pump_in, double seed_intensity) {
  params.validate();
  if (pump_in < 0.0 || seed_intensity < 0.0) throw DomainError("drive amplitudes must be non-negative");
  return {params.eta_p * pump_in / params.kappa_p,
          params.eta_s * params.kappa * std::sqrt(seed_intensity) /
              (params.chi * std::sqrt(params.kappa * params.kappa_p)),
          params.clip()};
}

std::array<double, 6> QuinticCoeffs::monomials() const {
  // (x - a)(x^2 - clip^2)^2 + b^2 x
  const double c2 = clip * clip;
  const double c4 = c2 * c2;
  return {1.0, -a, -2.0 * c2, 2.0 * a * c2, c4 + b * b, -a * c4};
}

double QuinticCoeffs::value(double x) const {
  const auto c = monomials();
  double v = 0.0;
  for (double ck : c) v = v * x + ck;
  return v;
}

double QuinticCoeffs::magnitude(double x) const {
  const auto c = monomials();
  double v = 0.0;
  for (double ck : c) v = v * std::abs(x) + std::abs(ck);
  return v;
}

std::vector<double> quintic_real_roots(const QuinticCoeffs& q) {
  if (q.a < 0.0 || q.b < 0.0 || !(q.clip > 0.0)) throw DomainError("quintic needs a, b >= 0 and clip > 0");

  std::vector<double> roots;
  if (q.b == 0.0) {
    // Factored form; the double root at +clip is exact.
    roots = {q.a, q.clip, q.clip};
    std::sort(roots.begin(), roots.end());
    return roots;
  }

  const auto c = q.monomials();
  Eigen::Matrix<double, 5, 5> companion = Eigen::Matrix<double, 5, 5>::Zero();
  for (int k = 0; k < 5; ++k) companion(0, k) = -c[static_cast<std::size_t>(k + 1)];
  for (int k = 1; k < 5; ++k) companion(k, k - 1) = 1.0;
  const Eigen::EigenSolver<Eigen::Matrix<double, 5, 5>> solver(companion, false);
  const auto& eig = solver.eigenvalues();

  const double scale = std::max({1.0, q.a, q.b, q.clip});
  for (int k = 0; k < 5; ++k) {
    if (std::abs(eig[k].imag()) > 1e-8 * scale) continue;
    double x = polish(q, eig[k].real());
    if (x < -1e-12 * scale) continue;
    x = std::max(x, 0.0);
    if (std::abs(q.value(x)) > 1e-10 * std::max(1.0, q.magnitude(x))) continue;
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

StableRoot select_stable(std::span<const double> roots, const QuinticCoeffs& q) {
  StableRoot out;
  double previous = -1.0;
  double best = -1.0;
  for (double x : roots) {
    if (!(x < q.clip)) continue;
    if (std::abs(x - previous) > 1e-9 * std::max(1.0, q.clip)) ++out.sub_clip_candidates;
    previous = x;
    best = std::max(best, x);
  }
  if (q.b == 0.0 && q.a >= q.clip) {
    out.value = q.clip;
    out.free_running_clip = true;
    return out;
  }
  if (best < 0.0) {
    throw std::logic_error("no quintic root below clip for a = " + std::to_string(q.a) +
                           ", b = " + std::to_string(q.b));
  }
  out.value = best;
  return out;
}

double threshold(const OpoParams& params) {
  params.validate();
  return params.kappa_p * params.kappa / (params.eta_p * params.chi);
}

double pump_in_for_a(const OpoParams& params, double a) { return a * params.kappa_p / params.eta_p; }

double seed_intensity_for_b(const OpoParams& params, double b) {
  const double amp = b * params.chi * std::sqrt(params.kappa * params.kappa_p) / (params.eta_s * params.kappa);
  return amp * amp;
}

SteadySolution injected_steady(const OpoParams& params, double pump_in, double seed_intensity, SpherePoint point) {
  params.validate();
  require_resonant(params);
  if (pump_in < 0.0 || seed_intensity < 0.0) throw DomainError("drive amplitudes must be non-negative");

  SteadySolution sol;
  sol.basis_point = point;

  if (seed_intensity == 0.0) {
    const double cos_half = std::cos(0.5 * point.theta);
    const FreeRunSteady free = free_running_steady(params, pump_in, cos_half * cos_half, -point.phi);
    sol.rotated = to_rotated_basis(free.state, point);
    sol.root.value = std::abs(free.state.pump);
    sol.root.free_running_clip = free.above_threshold;
    sol.root.sub_clip_candidates = free.above_threshold ? 0 : 1;
    sol.stable = sol.root.value < params.clip();
    return sol;
  }

  const QuinticCoeffs q = QuinticCoeffs::from_drive(params, pump_in, seed_intensity);
  const std::vector<double> roots = quintic_real_roots(q);
  sol.root = select_stable(roots, q);
  const double x = sol.root.value;
  const double seed_amp = std::sqrt(seed_intensity);
  const double denom = params.kappa * params.kappa - params.chi * params.chi * x * x;

  sol.rotated.pump = x;
  sol.rotated.signal = params.eta_s * params.kappa * seed_amp / denom;
  sol.rotated.idler = -params.eta_s * params.chi * seed_amp * x / denom;
  sol.stable = x < params.clip();

  const double residual = rhs_rotated(sol.rotated, params, pump_in, seed_amp).norm();
  const double drive_scale = std::max({1.0, params.eta_p * pump_in, params.eta_s * seed_amp});
  if (!(residual <= 1e-9 * drive_scale)) {
    throw std::logic_error("injected steady state failed its residual check: " + std::to_string(residual));
  }
  return sol;
}

FreeRunSteady free_running_steady(const OpoParams& params, double pump_in, double a_fraction, double delta_theta) {
  params.validate();
  require_resonant(params);
  if (pump_in < 0.0) throw DomainError("pump drive must be non-negative");
  if (!(a_fraction >= 0.0 && a_fraction <= 1.0)) throw DomainError("A fraction must lie in [0, 1]");

  const double a = params.eta_p * pump_in / params.kappa_p;
  const double clip = params.clip();

  FreeRunSteady out;
  out.family.delta_theta = delta_theta;
  if (a <= clip) {
    out.state.pump = a;
    out.family.pump_intensity = a * a;
    return out;
  }

  out.above_threshold = true;
  const double total = params.kappa_p / params.chi * (a - clip);
  out.family.pump_intensity = clip * clip;
  out.family.total = total;
  out.family.a_amp = std::sqrt(a_fraction * total);
  out.family.b_amp = std::sqrt((1.0 - a_fraction) * total);

  out.state.pump = clip;
  out.state.signal.plus = std::polar(out.family.a_amp, 0.5 * delta_theta);
  out.state.signal.minus = std::polar(out.family.b_amp, -0.5 * delta_theta);
  out.state.idler.plus = -std::conj(out.state.signal.minus);
  out.state.idler.minus = -std::conj(out.state.signal.plus);
  return out;
}

std::pair<StokesVector, StokesVector> downconverted_stokes(SpherePoint point) {
  const double st = std::sin(point.theta);
  const double ct = std::cos(point.theta);
  const StokesVector signal{st * std::cos(point.phi), -st * std::sin(point.phi), ct};
  return {signal, {signal.p1, signal.p2, -ct}};
}

}  // namespace oamopo
