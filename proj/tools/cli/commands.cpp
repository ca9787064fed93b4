#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "oamopo/oamopo.hpp"

namespace oamopo::cli {
namespace {

namespace fs = std::filesystem;

struct Overrides {
  std::optional<std::string> config_file, scenario, out_dir, units, path;
  std::optional<double> kappa_p, kappa, delta_p, delta, chi, eta_p, eta_s;
  std::optional<double> pump, seed_intensity, a, b, theta, phi;
  std::optional<int> grid_n, samples, jobs;
  std::optional<double> half_width, waist, dt, duration, a_fraction, delta_theta;
  std::optional<std::string> scan_a, scan_b;
  bool csv_maps = false;
};

void add_options(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config_file, "JSON scenario file");
  app->add_option("--scenario", o.scenario, "Scenario name used in output file names");
  app->add_option("--out", o.out_dir, "Output directory");
  app->add_option("--units", o.units, "kappa (rates in units of kappa) or absolute");
  app->add_option("--kappa-p", o.kappa_p, "Pump damping");
  app->add_option("--kappa", o.kappa, "Signal/idler damping");
  app->add_option("--delta-p", o.delta_p, "Pump detuning");
  app->add_option("--delta", o.delta, "Signal/idler detuning");
  app->add_option("--chi", o.chi, "Nonlinear coupling");
  app->add_option("--eta-p", o.eta_p, "Pump input coupling");
  app->add_option("--eta-s", o.eta_s, "Seed input coupling");
  app->add_option("--pump", o.pump, "Pump input amplitude");
  app->add_option("--seed-intensity", o.seed_intensity, "Seed intensity");
  app->add_option("--a", o.a, "Normalised pump drive (overrides --pump)");
  app->add_option("--b", o.b, "Normalised seed drive (overrides --seed-intensity)");
  app->add_option("--theta", o.theta, "Seed polar angle");
  app->add_option("--phi", o.phi, "Seed azimuth");
  app->add_option("--path", o.path, "lune:DPHI, octant, equator, null or a theta,phi CSV file");
  app->add_option("--grid-n", o.grid_n, "Image size in pixels");
  app->add_option("--half-width", o.half_width, "Image half width in waists");
  app->add_option("--waist", o.waist, "Beam waist");
  app->add_option("--dt", o.dt, "RK4 step");
  app->add_option("--duration", o.duration, "Integration time or sweep period");
  app->add_option("--samples", o.samples, "Recorded samples");
  app->add_option("--a-fraction", o.a_fraction, "Free-running share of power in LG+");
  app->add_option("--delta-theta", o.delta_theta, "Free-running relative phase");
  app->add_option("--scan-a", o.scan_a, "lo:hi:count grid over a");
  app->add_option("--scan-b", o.scan_b, "lo:hi:count grid over b");
  app->add_option("--jobs", o.jobs, "Worker threads for scans");
  app->add_flag("--csv-maps", o.csv_maps, "Also write intensity maps as CSV");
}

ScenarioConfig build_config(const std::string& mode, const Overrides& o) {
  ScenarioConfig c;
  if (o.config_file) c = load_config_file(c, *o.config_file);
  c.mode = mode;
  auto set = [](auto& target, const auto& value) {
    if (value) target = *value;
  };
  set(c.scenario, o.scenario);
  set(c.output_dir, o.out_dir);
  set(c.units, o.units);
  set(c.path, o.path);
  set(c.params.kappa_p, o.kappa_p);
  set(c.params.kappa, o.kappa);
  set(c.params.delta_p, o.delta_p);
  set(c.params.delta, o.delta);
  set(c.params.chi, o.chi);
  set(c.params.eta_p, o.eta_p);
  set(c.params.eta_s, o.eta_s);
  set(c.pump, o.pump);
  set(c.seed_intensity, o.seed_intensity);
  set(c.seed_point.theta, o.theta);
  set(c.seed_point.phi, o.phi);
  set(c.grid.n, o.grid_n);
  set(c.grid.half_width, o.half_width);
  set(c.grid.waist, o.waist);
  set(c.dt, o.dt);
  set(c.duration, o.duration);
  set(c.samples, o.samples);
  set(c.a_fraction, o.a_fraction);
  set(c.delta_theta, o.delta_theta);
  set(c.jobs, o.jobs);
  if (o.scan_a) c.scan_a = parse_range(*o.scan_a);
  if (o.scan_b) c.scan_b = parse_range(*o.scan_b);
  if (o.csv_maps) c.write_csv_maps = true;
  c = resolve(c);
  if (o.a) {
    if (!std::isfinite(*o.a) || *o.a < 0.0) throw ConfigError("--a must be non-negative");
    c.pump = pump_in_for_a(c.params, *o.a);
  }
  if (o.b) {
    if (!std::isfinite(*o.b) || *o.b < 0.0) throw ConfigError("--b must be non-negative");
    c.seed_intensity = seed_intensity_for_b(c.params, *o.b);
  }
  return c;
}

std::string fixed(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string num(double v) { return io::format_number(v); }

class OutputSet {
 public:
  explicit OutputSet(const ScenarioConfig& c) : config_(c) { fs::create_directories(c.output_dir); }

  std::ofstream open(const std::string& suffix, bool binary = false) {
    const fs::path p = fs::path(config_.output_dir) / (config_.scenario + "_" + suffix);
    std::ofstream f(p, binary ? std::ios::binary : std::ios::out);
    if (!f) throw ConfigError("cannot write '" + p.string() + "'");
    files_.push_back(p.filename().string());
    return f;
  }

  void write_json(const std::string& suffix, Json body) {
    body["config"] = to_json(config_);
    auto f = open(suffix);
    f << body.dump(2) << '\n';
  }

  /// Sidecar describing every non-JSON output of the run.
  void finish() {
    Json side;
    side["outputs"] = files_;
    side["config"] = to_json(config_);
    const fs::path p = fs::path(config_.output_dir) / (config_.scenario + "_" + config_.mode + ".config.json");
    std::ofstream f(p);
    if (!f) throw ConfigError("cannot write '" + p.string() + "'");
    f << side.dump(2) << '\n';
  }

 private:
  const ScenarioConfig& config_;
  std::vector<std::string> files_;
};

Json stokes_json(const ModeVector& v) {
  if (v.intensity() == 0.0) return nullptr;
  const auto s = stokes_from_mode(v);
  return Json::array({s.p1, s.p2, s.p3});
}

struct SteadyRow {
  double a = 0.0, b = 0.0, pump_in = 0.0, seed_intensity = 0.0;
  std::vector<double> roots;
  StableRoot stable{};
  bool steady_stable = false;
  FiveModeState state{};
};

SteadyRow steady_row(const ScenarioConfig& c, double pump_in, double seed_intensity) {
  SteadyRow r;
  const auto q = QuinticCoeffs::from_drive(c.params, pump_in, seed_intensity);
  r.a = q.a;
  r.b = q.b;
  r.pump_in = pump_in;
  r.seed_intensity = seed_intensity;
  r.roots = quintic_real_roots(q);
  const auto sol = injected_steady(c.params, pump_in, seed_intensity, c.seed_point);
  r.stable = sol.root;
  r.steady_stable = sol.stable;
  r.state = sol.lg_state();
  return r;
}

std::string join_roots(const std::vector<double>& roots) {
  std::string s;
  for (std::size_t k = 0; k < roots.size(); ++k) s += (k ? ";" : "") + num(roots[k]);
  return s;
}

void run_steady(const ScenarioConfig& c, std::ostream& out) {
  OutputSet files(c);
  if (!c.scan_a && !c.scan_b) {
    const auto r = steady_row(c, c.pump, c.seed_intensity);
    out << "a=" << num(r.a) << " b=" << num(r.b) << " clip=" << num(c.params.clip()) << '\n';
    out << "roots:";
    for (double x : r.roots) out << ' ' << num(x);
    out << '\n';
    out << "stable |alpha_p|=" << num(r.stable.value) << (r.stable.free_running_clip ? " (free-running clip)" : "")
        << '\n';
    out << "I_s=" << num(r.state.signal.intensity()) << " I_i=" << num(r.state.idler.intensity()) << '\n';
    Json body;
    body["a"] = r.a;
    body["b"] = r.b;
    body["clip"] = c.params.clip();
    body["roots"] = r.roots;
    body["stable_root"] = r.stable.value;
    body["free_running_clip"] = r.stable.free_running_clip;
    body["sub_clip_candidates"] = r.stable.sub_clip_candidates;
    body["linearly_stable"] = r.steady_stable;
    body["pump_intensity"] = std::norm(r.state.pump);
    body["signal_intensity"] = r.state.signal.intensity();
    body["idler_intensity"] = r.state.idler.intensity();
    body["signal_stokes"] = stokes_json(r.state.signal);
    body["idler_stokes"] = stokes_json(r.state.idler);
    files.write_json("steady.json", body);
    files.finish();
    return;
  }

  const double a0 = QuinticCoeffs::from_drive(c.params, c.pump, c.seed_intensity).a;
  const double b0 = QuinticCoeffs::from_drive(c.params, c.pump, c.seed_intensity).b;
  const ScanRange ra = c.scan_a.value_or(ScanRange{a0, a0, 1});
  const ScanRange rb = c.scan_b.value_or(ScanRange{b0, b0, 1});
  const std::size_t total = static_cast<std::size_t>(ra.count) * rb.count;
  std::vector<SteadyRow> rows(total);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(c.jobs));
  auto worker = [&](int id) {
    try {
      for (std::size_t k = id; k < total; k += c.jobs) {
        const double a = ra.value(static_cast<int>(k / rb.count));
        const double b = rb.value(static_cast<int>(k % rb.count));
        rows[k] = steady_row(c, pump_in_for_a(c.params, a), seed_intensity_for_b(c.params, b));
      }
    } catch (...) {
      errors[id] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (int id = 1; id < c.jobs; ++id) pool.emplace_back(worker, id);
  worker(0);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  auto f = files.open("steady_scan.csv");
  io::CsvWriter csv(f);
  csv.header({"a", "b", "pump_in", "seed_intensity", "roots", "stable_root", "free_running_clip",
              "sub_clip_candidates", "pump_intensity", "signal_intensity", "idler_intensity", "s_p1", "s_p2",
              "s_p3", "i_p1", "i_p2", "i_p3"});
  int multi = 0;
  for (const auto& r : rows) {
    std::vector<std::string> row{num(r.a),
                                 num(r.b),
                                 num(r.pump_in),
                                 num(r.seed_intensity),
                                 join_roots(r.roots),
                                 num(r.stable.value),
                                 r.stable.free_running_clip ? "1" : "0",
                                 std::to_string(r.stable.sub_clip_candidates),
                                 num(std::norm(r.state.pump)),
                                 num(r.state.signal.intensity()),
                                 num(r.state.idler.intensity())};
    for (const auto* v : {&r.state.signal, &r.state.idler}) {
      if (v->intensity() > 0.0) {
        const auto s = stokes_from_mode(*v);
        for (double p : {s.p1, s.p2, s.p3}) row.push_back(num(p));
      } else {
        row.insert(row.end(), 3, "");
      }
    }
    csv.row(row);
    if (r.stable.sub_clip_candidates > 1) ++multi;
  }
  out << "scanned " << total << " operating points";
  if (multi) out << " (" << multi << " with several sub-clip roots)";
  out << '\n';
  files.finish();
}

void run_free(const ScenarioConfig& c, std::ostream& out) {
  OutputSet files(c);
  const auto fr = free_running_steady(c.params, c.pump, c.a_fraction, c.delta_theta);
  out << "threshold=" << num(threshold(c.params)) << " above=" << (fr.above_threshold ? "yes" : "no") << '\n';
  out << "I_p=" << num(fr.family.pump_intensity) << " I_total=" << num(fr.family.total) << " A=" << num(fr.family.a_amp)
      << " B=" << num(fr.family.b_amp) << '\n';
  Json body;
  body["threshold"] = threshold(c.params);
  body["above_threshold"] = fr.above_threshold;
  body["pump_intensity"] = fr.family.pump_intensity;
  body["total_intensity"] = fr.family.total;
  body["a_amplitude"] = fr.family.a_amp;
  body["b_amplitude"] = fr.family.b_amp;
  body["delta_theta"] = fr.family.delta_theta;
  body["signal_stokes"] = stokes_json(fr.state.signal);
  body["idler_stokes"] = stokes_json(fr.state.idler);
  if (c.duration > 0.0) {
    const int steps = static_cast<int>(std::ceil(c.duration / c.dt));
    const int stride = std::max(1, steps / (c.samples - 1));
    const auto traj = integrate(tiny_seed_state(), c.params, constant_drive({Complex(c.pump, 0.0), {}}),
                                {c.duration, c.dt, stride});
    auto f = files.open("trajectory.csv");
    io::write_trajectory_csv(f, traj);
    const auto& s = traj.final_state();
    body["ode_final"] = {{"t", traj.final_time()},
                         {"pump_intensity", std::norm(s.pump)},
                         {"signal_intensity", s.signal.intensity()},
                         {"idler_intensity", s.idler.intensity()}};
    out << "ODE t=" << num(traj.final_time()) << ": I_p=" << num(std::norm(s.pump))
        << " I_s=" << num(s.signal.intensity()) << " I_i=" << num(s.idler.intensity()) << '\n';
  }
  files.write_json("free_run.json", body);
  files.finish();
}

void run_sweep_cmd(const ScenarioConfig& c, std::ostream& out) {
  OutputSet files(c);
  SweepSchedule s;
  s.path = load_path(c.path);
  s.duration = c.duration;
  s.samples = c.samples;
  s.seed_intensity = c.seed_intensity;
  s.params = c.params;
  s.pump_in = c.pump;
  s.dt = c.dt;
  const auto rec = run_sweep(s);
  {
    auto f = files.open("sweep.csv");
    io::write_sweep_csv(f, rec);
  }
  const auto pair = conjugation_pair(s.path);
  Json body;
  body["adiabatic"] = rec.adiabatic;
  body["adiabaticity_error"] = rec.adiabaticity_error;
  body["mirror_error"] = mirror_error(rec);
  body["closure_error"] = closure_error(rec);
  body["solid_angle"] = solid_angle(s.path);
  body["gamma_s"] = pair.signal.raw;
  body["gamma_i"] = pair.idler.raw;
  body["relative_phase"] = relative_phase_after_cycle(rec, s.path);
  files.write_json("sweep.json", body);
  files.finish();
  out << "adiabatic=" << (rec.adiabatic ? "yes" : "no") << " adiabaticity_error=" << num(rec.adiabaticity_error)
      << " mirror_error=" << num(mirror_error(rec)) << '\n';
  out << "relative phase after cycle=" << fixed("%.4f", relative_phase_after_cycle(rec, s.path)) << '\n';
}

void run_interfere(const ScenarioConfig& c, std::ostream& out) {
  OutputSet files(c);
  const auto path = load_path(c.path);
  const auto r = render_cycle(c.params, c.pump, c.seed_intensity, path, c.grid);
  {
    auto f = files.open("before.pgm", true);
    io::write_pgm(f, r.before);
  }
  {
    auto f = files.open("after.pgm", true);
    io::write_pgm(f, r.after);
  }
  if (c.write_csv_maps) {
    auto f1 = files.open("before.csv");
    io::write_intensity_csv(f1, r.before);
    auto f2 = files.open("after.csv");
    io::write_intensity_csv(f2, r.after);
  }
  Json body;
  body["gamma_s"] = r.phases.signal.raw;
  body["gamma_i"] = r.phases.idler.raw;
  body["relative_phase"] = r.phases.relative;
  body["rotation"] = r.rotation.angle;
  body["harmonic"] = r.rotation.harmonic;
  body["ring_radius"] = r.rotation.ring_radius;
  files.write_json("interfere.json", body);
  files.finish();
  out << "gamma_s=" << fixed("%+.4f", r.phases.signal.raw) << " gamma_i=" << fixed("%+.4f", r.phases.idler.raw)
      << '\n';
  out << "rotation=" << fixed("%+.4f", r.rotation.angle) << " (m=" << r.rotation.harmonic << ")\n";
}

void run_phase(const ScenarioConfig& c, std::ostream& out) {
  OutputSet files(c);
  const auto path = load_path(c.path);
  const double omega = solid_angle(path);
  const auto pair = conjugation_pair(path);
  const double berry = berry_connection_phase(path, 200);
  {
    auto f = files.open("phase.csv");
    io::CsvWriter csv(f);
    csv.header({"omega", "gamma_s", "gamma_i", "relative", "berry_phase"});
    csv.row({num(omega), num(pair.signal.raw), num(pair.idler.raw), num(pair.relative), num(berry)});
  }
  {
    auto f = files.open("path.csv");
    io::write_path_csv(f, path);
  }
  files.finish();
  out << "Omega=" << fixed("%.4f", omega) << " gamma_s=" << fixed("%+.4f", pair.signal.raw)
      << " gamma_i=" << fixed("%+.4f", pair.idler.raw) << '\n';
}

}  // namespace

void execute(const ScenarioConfig& config, std::ostream& out) {
  if (config.mode == "steady") return run_steady(config, out);
  if (config.mode == "free-run") return run_free(config, out);
  if (config.mode == "sweep") return run_sweep_cmd(config, out);
  if (config.mode == "interfere") return run_interfere(config, out);
  if (config.mode == "phase") return run_phase(config, out);
  throw ConfigError("unknown mode '" + config.mode + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Injected OPO simulator in the first-order transverse-mode subspace", "opo"};
  app.require_subcommand(1);
  Overrides o;
  const std::vector<std::pair<std::string, std::string>> modes{
      {"steady", "Quintic roots and the stable injected steady state (optionally on an a/b grid)"},
      {"free-run", "Free-running stationary family and an ODE check"},
      {"sweep", "Adiabatic sweep of the seed around a closed path"},
      {"interfere", "Signal-idler interference before and after a cycle"},
      {"phase", "Solid angle and geometric phases of a path"}};
  for (const auto& [name, help] : modes) add_options(app.add_subcommand(name, help), o);

  try {
    std::vector<std::string> reversed_args(args.rbegin(), args.rend());
    app.parse(reversed_args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    execute(build_config(sub->get_name(), o), out);
    return kOk;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "numerical failure at t=" << e.time() << ": " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace oamopo::cli
