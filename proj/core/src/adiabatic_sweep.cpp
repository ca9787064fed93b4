#include "oamopo/adiabatic_sweep.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oamopo/errors.hpp"

namespace oamopo {

namespace {

bool at_pole(SpherePoint p) { return std::abs(std::sin(p.theta)) < 1e-12; }

double raw_azimuth(const Vec3& v) { return from_unit_vector(v).phi; }

// Arcs that pass over a pole get the pole inserted as a vertex, so that the
// azimuth turn there is swept explicitly.
std::vector<SpherePoint> split_at_poles(const SpherePath& path) {
  std::vector<SpherePoint> out;
  const std::size_t n = path.vertices.size();
  for (std::size_t k = 0; k < n; ++k) {
    const SpherePoint a = path.vertices[k];
    out.push_back(a);
    if (k + 1 == n && !path.closed) break;
    const SpherePoint b = path.vertices[(k + 1) % n];
    if (at_pole(a) || at_pole(b)) continue;
    const Vec3 va = to_unit_vector(a);
    const Vec3 vb = to_unit_vector(b);
    const double len = arc_length(va, vb);
    for (double pole_theta : {0.0, kPi}) {
      const Vec3 pole = to_unit_vector({pole_theta, 0.0});
      if (std::abs(arc_length(va, pole) + arc_length(pole, vb) - len) < 1e-12) {
        out.push_back({pole_theta, 0.0});
      }
    }
  }
  return out;
}

}  // namespace

PathSchedule::PathSchedule(const SpherePath& path) {
  path.validate();
  const std::vector<SpherePoint> verts = split_at_poles(path);
  const std::size_t m = verts.size();
  const std::size_t arcs = path.closed ? m : m - 1;

  double phi = verts[0].phi;
  if (at_pole(verts[0]) && arcs > 0) phi = verts[1].phi;
  start_ = {verts[0].theta, phi};

  auto add_turn = [&](std::size_t prev, std::size_t pole, std::size_t next) {
    if (at_pole(verts[next]) || at_pole(verts[prev])) return;
    Segment dwell;
    dwell.dwell = true;
    dwell.theta = verts[pole].theta;
    dwell.phi_start = phi;
    dwell.turn = verts[next].phi - verts[prev].phi;
    dwell.begin = total_;
    dwell.length = std::abs(dwell.turn);
    if (dwell.length == 0.0) return;
    segments_.push_back(dwell);
    phi += dwell.turn;
    total_ += dwell.length;
  };

  for (std::size_t k = 0; k < arcs; ++k) {
    const SpherePoint a = verts[k];
    const SpherePoint b = verts[(k + 1) % m];
    if (k > 0 && at_pole(a)) add_turn(k - 1, k, (k + 1) % m);

    Segment arc;
    arc.from = to_unit_vector(a);
    arc.to = to_unit_vector(b);
    arc.length = arc_length(arc.from, arc.to);
    arc.begin = total_;
    arc.phi_start = phi;
    arc.meridian = at_pole(a) ? raw_azimuth(arc.to) : raw_azimuth(arc.from);
    arc.phi_raw_start = at_pole(a) ? arc.meridian : raw_azimuth(arc.from);
    const double raw_end = at_pole(b) ? arc.meridian : raw_azimuth(arc.to);
    phi += wrap_angle(raw_end - arc.phi_raw_start);
    total_ += arc.length;
    segments_.push_back(arc);
  }
  if (path.closed && arcs > 0 && at_pole(verts[0])) add_turn(m - 1, 0, 1);
}

SpherePoint PathSchedule::at(double fraction) const {
  if (segments_.empty() || total_ == 0.0) return start_;
  const double s = std::clamp(fraction, 0.0, 1.0) * total_;
  auto it = std::upper_bound(segments_.begin(), segments_.end(), s,
                             [](double value, const Segment& seg) { return value < seg.begin; });
  const Segment& seg = it == segments_.begin() ? segments_.front() : *std::prev(it);
  const double local = seg.length > 0.0 ? std::clamp((s - seg.begin) / seg.length, 0.0, 1.0) : 0.0;
  if (seg.dwell) return {seg.theta, seg.phi_start + seg.turn * local};

  const Vec3 p = slerp(seg.from, seg.to, local);
  const SpherePoint raw = from_unit_vector(p);
  const double raw_phi = std::abs(std::sin(raw.theta)) < 1e-12 ? seg.meridian : raw.phi;
  return {raw.theta, seg.phi_start + wrap_angle(raw_phi - seg.phi_raw_start)};
}

SweepRecord run_sweep(const SweepSchedule& schedule) {
  const OpoParams& params = schedule.params;
  params.validate();
  if (!(schedule.duration > 0.0)) throw DomainError("sweep duration must be positive");
  if (schedule.samples < 2) throw DomainError("sweep needs at least two samples");
  if (!(schedule.seed_intensity > 0.0)) throw DomainError("sweep needs a positive seed intensity");
  if (!(schedule.dt > 0.0) || schedule.dt * params.max_rate() >= 0.1) {
    throw DomainError("sweep step violates the guard dt * max rate < 0.1");
  }

  const PathSchedule path(schedule.path);
  const double pump_in = schedule.pump_in;
  const double intensity = schedule.seed_intensity;
  const double duration = schedule.duration;

  auto steady_at = [&](SpherePoint pt) { return injected_steady(params, pump_in, intensity, pt); };
  const SteadySolution first = steady_at(path.at(0.0));
  if (!first.stable) throw DomainError("operating point is not stable (|alpha_p| >= kappa/chi)");

  const DriveSchedule drive = [&](double t) {
    return InjectionDrive{pump_in, mode_from_sphere(path.at(t / duration), intensity)};
  };

  SweepRecord rec;
  rec.adiabatic = schedule.adiabatic();
  const auto n = static_cast<std::size_t>(schedule.samples);
  rec.times.reserve(n);
  rec.injected.reserve(n);
  rec.states.reserve(n);
  rec.steady.reserve(n);
  rec.signal_stokes.reserve(n);
  rec.idler_stokes.reserve(n);

  auto record = [&](double t, const FiveModeState& x) {
    const SpherePoint pt = path.at(t / duration);
    rec.times.push_back(t);
    rec.injected.push_back(pt);
    rec.states.push_back(x);
    rec.steady.push_back(steady_at(pt).lg_state());
    rec.signal_stokes.push_back(stokes_from_mode(x.signal));
    rec.idler_stokes.push_back(stokes_from_mode(x.idler));
  };

  FiveModeState x = first.lg_state();
  record(0.0, x);
  const double interval = duration / static_cast<double>(n - 1);
  const auto steps = static_cast<long long>(std::ceil(interval / schedule.dt - 1e-9));
  const double h = interval / static_cast<double>(steps);
  for (std::size_t i = 1; i < n; ++i) {
    const double t0 = static_cast<double>(i - 1) * interval;
    for (long long k = 0; k < steps; ++k) {
      x = rk4_step(x, t0 + static_cast<double>(k) * h, h, params, drive);
      if (!x.finite()) {
        throw NumericalError("sweep integration diverged", t0 + static_cast<double>(k + 1) * h);
      }
    }
    record(static_cast<double>(i) * interval, x);
  }
  rec.adiabaticity_error = adiabaticity_error(rec);
  return rec;
}

double adiabaticity_error(const SweepRecord& record) {
  double worst = 0.0;
  for (std::size_t k = 0; k < record.states.size(); ++k) {
    const double ref = record.steady[k].norm();
    worst = std::max(worst, (record.states[k] - record.steady[k]).norm() / ref);
  }
  return worst;
}

double mirror_error(const SweepRecord& record) {
  double worst = 0.0;
  for (std::size_t k = 0; k < record.signal_stokes.size(); ++k) {
    const StokesVector& s = record.signal_stokes[k];
    const StokesVector& i = record.idler_stokes[k];
    worst = std::max({worst, std::abs(s.p1 - i.p1), std::abs(s.p2 - i.p2), std::abs(s.p3 + i.p3)});
  }
  return worst;
}

double closure_error(const SweepRecord& record) {
  if (record.states.empty()) return 0.0;
  const FiveModeState& a = record.states.front();
  const FiveModeState& b = record.states.back();
  const double diffs[] = {
      std::abs(std::abs(a.pump) - std::abs(b.pump)),
      std::abs(std::abs(a.signal.plus) - std::abs(b.signal.plus)),
      std::abs(std::abs(a.signal.minus) - std::abs(b.signal.minus)),
      std::abs(std::abs(a.idler.plus) - std::abs(b.idler.plus)),
      std::abs(std::abs(a.idler.minus) - std::abs(b.idler.minus)),
  };
  return *std::max_element(std::begin(diffs), std::end(diffs)) / a.norm();
}

double relative_phase_after_cycle(const SweepRecord& /*record*/, const SpherePath& path) {
  if (!path.closed) throw DomainError("relative phase is only defined for a closed cycle");
  return solid_angle(path);
}

}  // namespace oamopo
