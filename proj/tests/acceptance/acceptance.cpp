// Acceptance suite: one PASS/FAIL line per criterion, every tolerance pinned
// here. Exit status is the number of failed criteria (capped at 1).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "oamopo/oamopo.hpp"
#include "random_geometry.hpp"

using namespace oamopo;
using oamopo::testing::random_path;
using oamopo::testing::random_point;
using oamopo::testing::rng;
using oamopo::testing::uniform;

namespace {

namespace fs = std::filesystem;

constexpr double kClipTol = 1e-6;
constexpr double kClipTime = 50.0;
constexpr double kMirrorTol = 1e-12;
constexpr double kResidualTol = 1e-10;
constexpr double kFreeRunTol = 1e-5;
constexpr double kRootResidualTol = 1e-10;
constexpr double kConvergeTol = 1e-6;
constexpr double kStokesTol = 1e-6;
constexpr double kBerryTol = 1e-5;
constexpr int kBerrySegments = 10000;
constexpr double kLuneTol = 1e-9;
constexpr double kConjugationTol = 1e-9;
constexpr double kMirrorFactor = 10.0;
constexpr double kSlope = -1.0;
constexpr double kSlopeTol = 0.2;
constexpr int kBins = 720;
constexpr double kBin = 2.0 * kPi / kBins;
constexpr double kConvergeMaxTime = 5000.0;

const GridSpec kGrid{256, 3.0, 1.0};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string sci(double v) { return fmt("%.2e", v); }

double step_for(const OpoParams& p) { return 0.05 / p.max_rate(); }

double relative(const FiveModeState& x, const FiveModeState& target) { return (x - target).norm() / target.norm(); }

// Integrates in blocks until the state is within tol of target or t_max is hit.
// Returns the final relative distance.
double converge(const OpoParams& p, const InjectionDrive& drive, const FiveModeState& target, double tol,
                double* reached_time = nullptr) {
  FiveModeState x{};
  double t = 0.0, err = relative(x, target);
  const double block = 25.0 / p.kappa;
  while (err > tol && t < kConvergeMaxTime) {
    x = integrate(x, p, constant_drive(drive), {block, step_for(p), 1000000}).final_state();
    t += block;
    err = relative(x, target);
  }
  if (reached_time) *reached_time = t;
  return err;
}

OpoParams random_params() {
  OpoParams p;
  p.kappa_p = uniform(0.5, 2.0);
  p.kappa = uniform(0.5, 2.0);
  p.chi = uniform(0.5, 2.0);
  p.eta_p = uniform(0.5, 2.0);
  p.eta_s = uniform(0.5, 2.0);
  return p;
}

Outcome pump_clipping() {
  const OpoParams p;
  const auto traj = integrate(tiny_seed_state(), p, constant_drive({Complex(2.0, 0.0), {}}),
                              {kClipTime / p.kappa, 0.01, 1000000});
  const double dev = std::abs(std::norm(traj.final_state().pump) - 1.0);
  return {dev < kClipTol, "| |alpha_p|^2 - 1 | = " + sci(dev) + " at t = 50/kappa (tol " + sci(kClipTol) + ")"};
}

Outcome free_running_mirror() {
  const OpoParams p;
  double mirror = 0.0, residual = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double pump = uniform(1.1, 4.0);
    const auto fr = free_running_steady(p, pump, uniform(0.0, 1.0), uniform(-kPi, kPi));
    const auto s = stokes_from_mode(fr.state.signal), i = stokes_from_mode(fr.state.idler);
    mirror = std::max({mirror, std::abs(s.p1 - i.p1), std::abs(s.p2 - i.p2), std::abs(s.p3 + i.p3)});
    residual = std::max(residual, rhs_lg_basis(fr.state, p, {Complex(pump, 0.0), {}}).norm());
  }
  return {mirror < kMirrorTol && residual < kResidualTol,
          "max mirror deviation " + sci(mirror) + ", max residual " + sci(residual) + " over 20 states"};
}

Outcome free_running_intensity() {
  struct Case {
    OpoParams p;
    double factor;
  };
  const Case cases[] = {{OpoParams{}, 2.0},
                        {OpoParams{2.0, 1.0, 0.0, 0.0, 0.5, 1.0, 1.0}, 1.5},
                        {OpoParams{0.5, 1.5, 0.0, 0.0, 1.2, 0.8, 1.0}, 2.5}};
  double worst_derived = 0.0, best_printed = 1e300;
  std::string detail;
  for (const auto& c : cases) {
    const double pump = c.factor * threshold(c.p);
    const double a = c.p.eta_p * pump / c.p.kappa_p;
    const double derived = c.p.kappa_p / c.p.chi * (a - c.p.clip());
    const double printed = c.p.chi / c.p.kappa_p * (a - c.p.clip());
    const auto traj =
        integrate(tiny_seed_state(), c.p, constant_drive({Complex(pump, 0.0), {}}), {600.0, step_for(c.p), 1000000});
    const double ode = traj.final_state().signal.intensity();
    worst_derived = std::max(worst_derived, std::abs(ode - derived));
    best_printed = std::min(best_printed, std::abs(ode - printed) + (c.p.kappa_p == c.p.chi ? 1e300 : 0.0));
    detail += fmt(" I_ode=%.6f", ode) + fmt("/kp_chi=%.6f", derived) + fmt("/chi_kp=%.6f;", printed);
  }
  const bool selects_derived = worst_derived < kFreeRunTol && best_printed > 1e-2;
  return {worst_derived < kFreeRunTol,
          "max |I_ode - (kp/chi)(a - kappa/chi)| = " + sci(worst_derived) + "; dynamics selects " +
              (selects_derived ? "(kappa_p/chi)" : "neither form clearly") + ";" + detail};
}

Outcome quintic_correctness() {
  const OpoParams p;
  double residual = 0.0, conv = 0.0, slowest = 0.0;
  bool below_clip = true;
  for (int k = 0; k < 100; ++k) {
    const double a = uniform(0.0, 3.0), b = uniform(0.02, 1.5);
    const QuinticCoeffs q{a, b, p.clip()};
    const auto roots = quintic_real_roots(q);
    for (double x : roots) residual = std::max(residual, std::abs(q.value(x)) / std::max(1.0, q.magnitude(x)));
    const auto stable = select_stable(roots, q);
    below_clip = below_clip && stable.value < p.clip();
    const double pump = pump_in_for_a(p, a), I = seed_intensity_for_b(p, b);
    const auto pt = random_point();
    const auto target = injected_steady(p, pump, I, pt).lg_state();
    double t = 0.0;
    conv = std::max(conv, converge(p, {Complex(pump, 0.0), mode_from_sphere(pt, I)}, target, kConvergeTol, &t));
    slowest = std::max(slowest, t);
  }
  return {residual < kRootResidualTol && below_clip && conv <= kConvergeTol,
          "max scaled residual " + sci(residual) + ", all stable roots below clip: " + (below_clip ? "yes" : "no") +
              ", worst ODE distance " + sci(conv) + " (slowest case t = " + fmt("%.0f", slowest) + ")"};
}

Outcome injected_steady_state() {
  double residual = 0.0, conv = 0.0;
  int stable = 0;
  for (int k = 0; k < 20; ++k) {
    const OpoParams p = random_params();
    const double pump = pump_in_for_a(p, uniform(0.0, 3.0) * p.clip());
    const double I = seed_intensity_for_b(p, uniform(0.05, 1.0) * p.clip());
    const auto pt = random_point();
    const auto sol = injected_steady(p, pump, I, pt);
    stable += sol.stable;
    const InjectionDrive drive{Complex(pump, 0.0), mode_from_sphere(pt, I)};
    residual = std::max(residual, rhs_lg_basis(sol.lg_state(), p, drive).norm());
    conv = std::max(conv, converge(p, drive, sol.lg_state(), kConvergeTol));
  }
  return {residual < kResidualTol && conv <= kConvergeTol && stable == 20,
          "max residual " + sci(residual) + ", worst ODE distance " + sci(conv) + ", stable " + std::to_string(stable) +
              "/20"};
}

Outcome downconverted() {
  const OpoParams p;
  const double pump = 0.5, I = 0.04;
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto pt = random_point();
    const InjectionDrive drive{Complex(pump, 0.0), mode_from_sphere(pt, I)};
    const auto target = injected_steady(p, pump, I, pt).lg_state();
    FiveModeState x{};
    while (relative(x, target) > 1e-9) x = integrate(x, p, constant_drive(drive), {25.0, 0.02, 1000000}).final_state();
    const auto [sig, idl] = downconverted_stokes(pt);
    const auto s = stokes_from_mode(x.signal), i = stokes_from_mode(x.idler);
    worst = std::max({worst, std::abs(s.p1 - sig.p1), std::abs(s.p2 - sig.p2), std::abs(s.p3 - sig.p3),
                      std::abs(i.p1 - idl.p1), std::abs(i.p2 - idl.p2), std::abs(i.p3 - idl.p3)});
  }
  return {worst < kStokesTol, "max Stokes deviation " + sci(worst) + " over 50 points"};
}

Outcome geometric() {
  std::vector<std::pair<std::string, SpherePath>> paths{
      {"lune(pi/2)", lune_path(kPi / 2)}, {"octant", octant_path()}, {"equator", equator_path()}};
  for (int k = 0; k < 20; ++k) paths.emplace_back("random", random_path());
  double berry = 0.0;
  for (const auto& [name, path] : paths) {
    const int per_arc = kBerrySegments / static_cast<int>(path.arc_count());
    berry = std::max(berry, std::abs(wrap_angle(berry_connection_phase(path, per_arc) - geometric_phase(path).raw)));
  }
  double lune = 0.0;
  for (double d : {0.1, kPi / 2, kPi, 3 * kPi / 2}) lune = std::max(lune, std::abs(solid_angle(lune_path(d)) - d));
  return {berry < kBerryTol && lune < kLuneTol,
          "max |berry - (-Omega/2)| mod 2pi = " + sci(berry) + " over 23 paths; max |Omega_lune - dphi| = " + sci(lune)};
}

Outcome conjugation() {
  std::vector<SpherePath> paths{lune_path(kPi / 2), octant_path(), equator_path(), null_path()};
  for (double d : {0.1, kPi, 3 * kPi / 2}) paths.push_back(lune_path(d));
  for (int k = 0; k < 20; ++k) paths.push_back(random_path());
  double worst = 0.0;
  for (const auto& path : paths) {
    const auto pair = conjugation_pair(path);
    worst = std::max(worst, std::abs(wrap_angle(pair.idler.raw + pair.signal.raw)));
  }
  const auto lune = conjugation_pair(lune_path(kPi / 2));
  const double lune_err = std::max(std::abs(lune.signal.raw + kPi / 4), std::abs(lune.idler.raw - kPi / 4));
  return {worst < kConjugationTol && lune_err < kConjugationTol,
          "max |gamma_i + gamma_s| mod 2pi = " + sci(worst) + "; lune(pi/2) -> (" + fmt("%+.6f", lune.signal.raw) + ", " +
              fmt("%+.6f", lune.idler.raw) + ")"};
}

Outcome adiabatic() {
  const double durations[] = {50.0, 200.0, 1000.0, 5000.0};
  std::vector<double> lx, ly;
  bool mirrored = true;
  std::string detail;
  for (double T : durations) {
    SweepSchedule s;
    s.path = lune_path(kPi / 2);
    s.duration = T;
    s.samples = 401;
    const auto rec = run_sweep(s);
    const double m = mirror_error(rec);
    mirrored = mirrored && m < kMirrorFactor * rec.adiabaticity_error;
    lx.push_back(std::log(T));
    ly.push_back(std::log(rec.adiabaticity_error));
    detail += " T=" + fmt("%.0f", T) + ": adiab " + sci(rec.adiabaticity_error) + " mirror " + sci(m) + ";";
  }
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sx += lx[k];
    sy += ly[k];
    sxx += lx[k] * lx[k];
    sxy += lx[k] * ly[k];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {mirrored && std::abs(slope - kSlope) <= kSlopeTol,
          "log-log slope " + fmt("%.3f", slope) + ", mirror < 10 x adiabaticity: " + (mirrored ? "yes" : "no") + ";" +
              detail};
}

IntensityMap lg_pair(double delta) {
  return mutual_interference(synthesize_field({1.0, 0.0}, 0.0, kGrid), synthesize_field({0.0, 1.0}, delta, kGrid));
}

// Two-fold patterns are identical after a half turn, so rotations compare modulo pi.
double rotation_error(double measured, double expected) { return std::abs(std::remainder(measured - expected, kPi)); }

Outcome interference_rotation(std::string& info) {
  const auto before = lg_pair(0.0);
  double oracle = 0.0;
  for (int k = 0; k <= 10; ++k) {
    const double delta = k * kPi / 20;
    oracle = std::max(oracle, rotation_error(pattern_rotation(before, lg_pair(delta), kBins), delta / 2));
  }
  const OpoParams p;
  double pipeline = 0.0, pole = 0.0;
  std::string measured, pole_measured;
  for (double d : {kPi / 2, kPi, 3 * kPi / 2}) {
    const auto r = render_cycle(p, 0.5, 0.04, lune_path(d), kGrid);
    pipeline = std::max(pipeline, rotation_error(r.rotation.angle, d / 2));
    measured += " " + fmt("%+.4f", r.rotation.angle);
    const auto q = render_cycle(p, 0.5, 0.04, starting_at(lune_path(d), 1), kGrid);
    pole = std::max(pole, rotation_error(q.rotation.angle, d / 2));
    pole_measured += " " + fmt("%+.4f", q.rotation.angle);
  }
  info = "pole-start variant (signal LG+, idler LG-): rotations" + pole_measured + ", max error " + sci(pole) +
         (pole <= kBin ? " (within one bin)" : " (outside one bin)");
  return {oracle <= kBin && pipeline <= kBin,
          "estimator oracle max error " + sci(oracle) + "; equatorial-seed rotations" + measured +
              " vs dphi/2 = +0.7854 +1.5708 +2.3562 (mod pi), max error " + sci(pipeline) + " (tol one bin " +
              sci(kBin) + ")"};
}

std::map<std::string, std::string> run_scenarios(const fs::path& dir) {
  fs::remove_all(dir);
  const std::string out = dir.string();
  const std::vector<std::vector<std::string>> runs{
      {"steady", "--a", "0.5", "--b", "0.2", "--scenario", "steady"},
      {"steady", "--scan-a", "0:3:31", "--scan-b", "0:1:21", "--jobs", "4", "--scenario", "scan"},
      {"free-run", "--pump", "2", "--scenario", "free"},
      {"sweep", "--path", "lune:1.5707963267948966", "--duration", "200", "--scenario", "sweep"},
      {"interfere", "--path", "lune:1.5707963267948966", "--scenario", "quarter"},
      {"interfere", "--path", "lune:3.141592653589793", "--scenario", "half"},
      {"interfere", "--path", "lune:4.71238898038469", "--scenario", "threequarter"},
      {"phase", "--path", "octant", "--scenario", "octant"},
      {"phase", "--path", "equator", "--scenario", "equator"}};
  for (auto args : runs) {
    args.insert(args.end(), {"--out", out});
    std::ostringstream o, e;
    if (cli::run(args, o, e) != 0) throw std::runtime_error("scenario failed: " + e.str());
  }
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    files[entry.path().filename().string()] = s.str();
  }
  return files;
}

Outcome determinism() {
  const fs::path dir = "acceptance_scenarios";
  const auto first = run_scenarios(dir);
  const auto second = run_scenarios(dir);
  int differing = 0, data_files = 0;
  for (const auto& [name, bytes] : first) {
    const auto ext = fs::path(name).extension();
    if (ext == ".csv" || ext == ".json") ++data_files;
    auto it = second.find(name);
    if (it == second.end() || it->second != bytes) ++differing;
  }
  return {differing == 0 && first.size() == second.size() && data_files > 0,
          std::to_string(first.size()) + " files (" + std::to_string(data_files) + " CSV/JSON) compared, " +
              std::to_string(differing) + " differ"};
}

}  // namespace

int main() {
  rng().seed(7130);
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  std::string info;
  const std::vector<Criterion> criteria{
      {1, "pump clipping", pump_clipping},
      {2, "free-running mirror symmetry", free_running_mirror},
      {3, "free-running intensity formula", free_running_intensity},
      {4, "quintic correctness", quintic_correctness},
      {5, "injected steady state", injected_steady_state},
      {6, "down-converted Stokes", downconverted},
      {7, "geometric phase", geometric},
      {8, "conjugation", conjugation},
      {9, "adiabatic tracking", adiabatic},
      {10, "interference rotation", [&] { return interference_rotation(info); }},
      {11, "determinism", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %-32s %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    if (c.id == 10 && !info.empty()) std::printf("INFO 10 %-32s %s\n", "interference rotation", info.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
