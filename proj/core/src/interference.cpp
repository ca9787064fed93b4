#include "oamopo/interference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oamopo/errors.hpp"
#include "oamopo/steady_state.hpp"

namespace oamopo {

namespace {

void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw DomainError("maps are sampled on different grids");
}

double bilinear(const IntensityMap& map, double x, double y) {
  const GridSpec& g = map.grid;
  const double fi = x / g.pitch() + 0.5 * (g.n - 1);
  const double fj = y / g.pitch() + 0.5 * (g.n - 1);
  const int i0 = std::clamp(static_cast<int>(std::floor(fi)), 0, g.n - 2);
  const int j0 = std::clamp(static_cast<int>(std::floor(fj)), 0, g.n - 2);
  const double u = std::clamp(fi - i0, 0.0, 1.0);
  const double v = std::clamp(fj - j0, 0.0, 1.0);
  return (1 - u) * (1 - v) * map.at(i0, j0) + u * (1 - v) * map.at(i0 + 1, j0) + (1 - u) * v * map.at(i0, j0 + 1) +
         u * v * map.at(i0 + 1, j0 + 1);
}

double ring_of_maximum(const IntensityMap& map) {
  const GridSpec& g = map.grid;
  const double pitch = g.pitch();
  const int rings = g.n / 2;
  std::vector<double> sum(static_cast<std::size_t>(rings), 0.0);
  std::vector<int> count(static_cast<std::size_t>(rings), 0);
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const double r = std::hypot(g.coordinate(i), g.coordinate(j));
      const auto bin = static_cast<std::size_t>(r / pitch);
      if (bin >= sum.size()) continue;
      sum[bin] += map.at(i, j);
      ++count[bin];
    }
  }
  std::size_t best = 0;
  double best_mean = -1.0;
  for (std::size_t b = 0; b < sum.size(); ++b) {
    if (count[b] == 0) continue;
    const double mean = sum[b] / count[b];
    if (mean > best_mean) {
      best_mean = mean;
      best = b;
    }
  }
  return (static_cast<double>(best) + 0.5) * pitch;
}

std::vector<double> azimuthal_profile(const IntensityMap& map, double radius, int bins) {
  std::vector<double> out(static_cast<std::size_t>(bins));
  for (int k = 0; k < bins; ++k) {
    const double az = 2.0 * kPi * k / bins;
    out[static_cast<std::size_t>(k)] = bilinear(map, radius * std::cos(az), radius * std::sin(az));
  }
  return out;
}

int dominant_harmonic(const std::vector<double>& profile) {
  const auto bins = static_cast<int>(profile.size());
  int best = 0;
  double best_power = 0.0;
  for (int m = 1; m <= bins / 2; ++m) {
    Complex c{};
    for (int k = 0; k < bins; ++k) c += profile[static_cast<std::size_t>(k)] * std::polar(1.0, -2.0 * kPi * m * k / bins);
    if (std::norm(c) > best_power) {
      best_power = std::norm(c);
      best = m;
    }
  }
  return best;
}

}  // namespace

double IntensityMap::integral() const {
  const double area = grid.pitch() * grid.pitch();
  return std::accumulate(values.begin(), values.end(), 0.0) * area;
}

double IntensityMap::max() const { return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end()); }

FieldMap synthesize_field(const ModeVector& v, double extra_phase, const GridSpec& grid) {
  grid.validate();
  FieldMap out{grid, std::vector<Complex>(static_cast<std::size_t>(grid.n) * grid.n)};
  const Complex global = std::polar(1.0, extra_phase);
  const Complex cp = global * v.plus;
  const Complex cm = global * v.minus;
  for (int j = 0; j < grid.n; ++j) {
    const double y = grid.coordinate(j);
    for (int i = 0; i < grid.n; ++i) {
      const double x = grid.coordinate(i);
      out.values[static_cast<std::size_t>(j) * grid.n + i] = cp * lg_field(+1, x, y, grid) + cm * lg_field(-1, x, y, grid);
    }
  }
  return out;
}

IntensityMap intensity(const FieldMap& field) {
  IntensityMap out{field.grid, std::vector<double>(field.values.size())};
  std::transform(field.values.begin(), field.values.end(), out.values.begin(), [](Complex z) { return std::norm(z); });
  return out;
}

IntensityMap mutual_interference(const FieldMap& signal, const FieldMap& idler) {
  require_same_grid(signal.grid, idler.grid);
  IntensityMap out{signal.grid, std::vector<double>(signal.values.size())};
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = std::norm(signal.values[k] + idler.values[k]);
  return out;
}

RotationEstimate estimate_rotation(const IntensityMap& before, const IntensityMap& after, int bins) {
  require_same_grid(before.grid, after.grid);
  if (bins < 8) throw DomainError("need at least 8 azimuthal bins");

  RotationEstimate out;
  out.ring_radius = ring_of_maximum(before);
  const std::vector<double> p = azimuthal_profile(before, out.ring_radius, bins);
  const std::vector<double> q = azimuthal_profile(after, out.ring_radius, bins);

  std::vector<double> corr(static_cast<std::size_t>(bins), 0.0);
  for (int shift = 0; shift < bins; ++shift) {
    double acc = 0.0;
    for (int k = 0; k < bins; ++k) {
      acc += p[static_cast<std::size_t>(k)] * q[static_cast<std::size_t>((k + shift) % bins)];
    }
    corr[static_cast<std::size_t>(shift)] = acc;
  }
  const auto [lo, hi] = std::minmax_element(corr.begin(), corr.end());
  if (*hi - *lo <= 1e-6 * std::abs(*hi)) throw DomainError("no fringes: pattern has no azimuthal structure");

  out.harmonic = std::max(1, dominant_harmonic(p));
  const auto best = static_cast<int>(std::distance(corr.begin(), hi));
  const double period = 2.0 * kPi / out.harmonic;
  double angle = std::remainder(2.0 * kPi * best / bins, period);
  if (angle <= -0.5 * period) angle += period;
  out.angle = angle;
  return out;
}

double pattern_rotation(const IntensityMap& before, const IntensityMap& after, int bins) {
  return estimate_rotation(before, after, bins).angle;
}

CycleRender render_cycle(const OpoParams& params, double pump_in, double seed_intensity, const SpherePath& path,
                         const GridSpec& grid) {
  grid.validate();
  if (!path.closed) throw DomainError("render_cycle needs a closed path");
  const SteadySolution steady = injected_steady(params, pump_in, seed_intensity, path.vertices.front());
  if (!steady.stable) throw DomainError("operating point is not stable (|alpha_p| >= kappa/chi)");
  const FiveModeState lg = steady.lg_state();

  CycleRender out;
  out.signal = lg.signal;
  out.idler = lg.idler;
  out.phases = conjugation_pair(path);
  out.before = mutual_interference(synthesize_field(out.signal, 0.0, grid), synthesize_field(out.idler, 0.0, grid));
  out.after = mutual_interference(synthesize_field(out.signal, out.phases.signal.raw, grid),
                                  synthesize_field(out.idler, out.phases.idler.raw, grid));
  out.rotation = estimate_rotation(out.before, out.after);
  return out;
}

}  // namespace oamopo
