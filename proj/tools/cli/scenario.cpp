#include "cli/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "oamopo/errors.hpp"
#include "oamopo/io.hpp"

namespace oamopo::cli {
namespace {

void check_keys(const Json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

double number(const Json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

int integer(const Json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

std::string text(const Json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

void read_number(const Json& obj, const char* key, const std::string& where, double& target) {
  if (obj.contains(key)) target = number(obj, key, where);
}

ScanRange range_from_json(const Json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number_integer())
    throw ConfigError(where + ": expected [lo, hi, count]");
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<int>()};
}

}  // namespace

ScenarioConfig merge_json(ScenarioConfig c, const Json& doc) {
  check_keys(doc, "config",
             {"mode", "scenario", "units", "params", "drive", "seed_point", "path", "grid", "output_dir",
              "integrator", "free_run", "scan", "jobs", "write_csv_maps"});
  if (doc.contains("mode")) c.mode = text(doc, "mode", "config");
  if (doc.contains("scenario")) c.scenario = text(doc, "scenario", "config");
  if (doc.contains("units")) c.units = text(doc, "units", "config");
  if (doc.contains("output_dir")) c.output_dir = text(doc, "output_dir", "config");
  if (doc.contains("path")) c.path = text(doc, "path", "config");
  if (doc.contains("jobs")) c.jobs = integer(doc, "jobs", "config");
  if (doc.contains("write_csv_maps")) {
    if (!doc["write_csv_maps"].is_boolean()) throw ConfigError("config.write_csv_maps: expected a boolean");
    c.write_csv_maps = doc["write_csv_maps"].get<bool>();
  }
  if (doc.contains("params")) {
    const auto& p = doc["params"];
    check_keys(p, "params", {"kappa_p", "kappa", "delta_p", "delta", "chi", "eta_p", "eta_s"});
    read_number(p, "kappa_p", "params", c.params.kappa_p);
    read_number(p, "kappa", "params", c.params.kappa);
    read_number(p, "delta_p", "params", c.params.delta_p);
    read_number(p, "delta", "params", c.params.delta);
    read_number(p, "chi", "params", c.params.chi);
    read_number(p, "eta_p", "params", c.params.eta_p);
    read_number(p, "eta_s", "params", c.params.eta_s);
  }
  if (doc.contains("drive")) {
    const auto& d = doc["drive"];
    check_keys(d, "drive", {"pump", "seed_intensity"});
    read_number(d, "pump", "drive", c.pump);
    read_number(d, "seed_intensity", "drive", c.seed_intensity);
  }
  if (doc.contains("seed_point")) {
    const auto& s = doc["seed_point"];
    check_keys(s, "seed_point", {"theta", "phi"});
    read_number(s, "theta", "seed_point", c.seed_point.theta);
    read_number(s, "phi", "seed_point", c.seed_point.phi);
  }
  if (doc.contains("grid")) {
    const auto& g = doc["grid"];
    check_keys(g, "grid", {"n", "half_width", "waist"});
    if (g.contains("n")) c.grid.n = integer(g, "n", "grid");
    read_number(g, "half_width", "grid", c.grid.half_width);
    read_number(g, "waist", "grid", c.grid.waist);
  }
  if (doc.contains("integrator")) {
    const auto& g = doc["integrator"];
    check_keys(g, "integrator", {"dt", "duration", "samples"});
    read_number(g, "dt", "integrator", c.dt);
    read_number(g, "duration", "integrator", c.duration);
    if (g.contains("samples")) c.samples = integer(g, "samples", "integrator");
  }
  if (doc.contains("free_run")) {
    const auto& f = doc["free_run"];
    check_keys(f, "free_run", {"a_fraction", "delta_theta"});
    read_number(f, "a_fraction", "free_run", c.a_fraction);
    read_number(f, "delta_theta", "free_run", c.delta_theta);
  }
  if (doc.contains("scan")) {
    const auto& s = doc["scan"];
    check_keys(s, "scan", {"a", "b"});
    if (s.contains("a")) c.scan_a = range_from_json(s["a"], "scan.a");
    if (s.contains("b")) c.scan_b = range_from_json(s["b"], "scan.b");
  }
  return c;
}

ScenarioConfig load_config_file(ScenarioConfig base, const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file '" + file + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config file '" + file + "': " + e.what());
  }
  return merge_json(std::move(base), doc);
}

ScenarioConfig resolve(ScenarioConfig c) {
  if (c.units != "kappa" && c.units != "absolute") throw ConfigError("units must be 'kappa' or 'absolute'");
  try {
    c.params.validate();
    c.grid.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (c.units == "kappa") {
    const double k = c.params.kappa;
    c.params.kappa_p /= k;
    c.params.delta_p /= k;
    c.params.delta /= k;
    c.params.chi /= k;
    c.params.eta_p /= k;
    c.params.eta_s /= k;
    c.params.kappa = 1.0;
  }
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(c.pump) || c.pump < 0.0) throw ConfigError("drive.pump must be finite and non-negative");
  if (!finite(c.seed_intensity) || c.seed_intensity < 0.0)
    throw ConfigError("drive.seed_intensity must be finite and non-negative");
  if (!finite(c.seed_point.theta) || !finite(c.seed_point.phi) || c.seed_point.theta < 0.0 ||
      c.seed_point.theta > kPi)
    throw ConfigError("seed_point.theta must lie in [0, pi]");
  if (!finite(c.dt) || c.dt <= 0.0) throw ConfigError("integrator.dt must be positive");
  if (!finite(c.duration) || c.duration < 0.0) throw ConfigError("integrator.duration must be non-negative");
  if (c.samples < 2) throw ConfigError("integrator.samples must be at least 2");
  if (!finite(c.a_fraction) || c.a_fraction < 0.0 || c.a_fraction > 1.0)
    throw ConfigError("free_run.a_fraction must lie in [0, 1]");
  if (!finite(c.delta_theta)) throw ConfigError("free_run.delta_theta must be finite");
  if (c.jobs < 1) throw ConfigError("jobs must be at least 1");
  for (const auto* r : {&c.scan_a, &c.scan_b}) {
    if (!*r) continue;
    if (!finite((*r)->lo) || !finite((*r)->hi) || (*r)->count < 1 || (*r)->lo < 0.0 || (*r)->hi < 0.0)
      throw ConfigError("scan ranges need non-negative bounds and count >= 1");
  }
  if (c.scenario.empty() || c.scenario.find('/') != std::string::npos)
    throw ConfigError("scenario must be a non-empty name without '/'");
  return c;
}

Json to_json(const ScenarioConfig& c) {
  Json j;
  j["mode"] = c.mode;
  j["scenario"] = c.scenario;
  j["units"] = c.units;
  j["params"] = {{"kappa_p", c.params.kappa_p}, {"kappa", c.params.kappa}, {"delta_p", c.params.delta_p},
                 {"delta", c.params.delta},     {"chi", c.params.chi},     {"eta_p", c.params.eta_p},
                 {"eta_s", c.params.eta_s}};
  j["drive"] = {{"pump", c.pump}, {"seed_intensity", c.seed_intensity}};
  j["seed_point"] = {{"theta", c.seed_point.theta}, {"phi", c.seed_point.phi}};
  j["path"] = c.path;
  j["grid"] = {{"n", c.grid.n}, {"half_width", c.grid.half_width}, {"waist", c.grid.waist}};
  j["output_dir"] = c.output_dir;
  j["integrator"] = {{"dt", c.dt}, {"duration", c.duration}, {"samples", c.samples}};
  j["free_run"] = {{"a_fraction", c.a_fraction}, {"delta_theta", c.delta_theta}};
  Json scan = Json::object();
  if (c.scan_a) scan["a"] = {c.scan_a->lo, c.scan_a->hi, c.scan_a->count};
  if (c.scan_b) scan["b"] = {c.scan_b->lo, c.scan_b->hi, c.scan_b->count};
  j["scan"] = scan;
  j["jobs"] = c.jobs;
  j["write_csv_maps"] = c.write_csv_maps;
  return j;
}

SpherePath load_path(const std::string& spec) {
  const bool preset = spec.rfind("lune:", 0) == 0 || spec == "octant" || spec == "equator" || spec == "null";
  try {
    if (preset) return path_preset(spec);
    std::ifstream in(spec);
    if (!in) throw ConfigError("unknown path preset or unreadable path file '" + spec + "'");
    auto path = io::read_path_csv(in, true);
    path.validate();
    return path;
  } catch (const DomainError& e) {
    throw ConfigError(std::string("path: ") + e.what());
  }
}

ScanRange parse_range(const std::string& textv) {
  const auto p1 = textv.find(':');
  const auto p2 = p1 == std::string::npos ? p1 : textv.find(':', p1 + 1);
  if (p2 == std::string::npos) throw ConfigError("range '" + textv + "': expected lo:hi:count");
  try {
    std::size_t used = 0;
    ScanRange r;
    const std::string lo = textv.substr(0, p1), hi = textv.substr(p1 + 1, p2 - p1 - 1), n = textv.substr(p2 + 1);
    r.lo = std::stod(lo, &used);
    if (used != lo.size()) throw std::invalid_argument(lo);
    r.hi = std::stod(hi, &used);
    if (used != hi.size()) throw std::invalid_argument(hi);
    r.count = std::stoi(n, &used);
    if (used != n.size()) throw std::invalid_argument(n);
    return r;
  } catch (const std::logic_error&) {
    throw ConfigError("range '" + textv + "': expected lo:hi:count");
  }
}

}  // namespace oamopo::cli
