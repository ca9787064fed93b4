#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "oamopo/geometric_phase.hpp"
#include "oamopo/mode_algebra.hpp"
#include "oamopo/opo_dynamics.hpp"

namespace oamopo::cli {

/// Invalid or inconsistent configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScanRange {
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;

  double value(int k) const { return count == 1 ? lo : lo + (hi - lo) * k / (count - 1); }
};

/// Fully resolved run description. Defaults: unit rates, resonance.
struct ScenarioConfig {
  std::string mode;
  std::string scenario = "run";
  std::string units = "kappa";  ///< "kappa": rates given in units of kappa; "absolute": as given
  OpoParams params{};
  double pump = 0.5;            ///< alpha_p^in (real, theta_p^in = 0)
  double seed_intensity = 0.04; ///< I_s^in
  SpherePoint seed_point{0.5 * kPi, 0.0};
  std::string path = "lune:1.5707963267948966";  ///< preset name or CSV file
  GridSpec grid{256, 3.0, 1.0};
  std::string output_dir = "out";
  double dt = 0.02;
  double duration = 200.0;
  int samples = 201;
  double a_fraction = 0.5;
  double delta_theta = 0.0;
  std::optional<ScanRange> scan_a;
  std::optional<ScanRange> scan_b;
  int jobs = 1;
  bool write_csv_maps = false;
};

using Json = nlohmann::ordered_json;

/// Applies a JSON document on top of `base`. Unknown keys and wrong types raise
/// ConfigError.
ScenarioConfig merge_json(ScenarioConfig base, const Json& doc);
ScenarioConfig load_config_file(ScenarioConfig base, const std::string& file);

/// Checks ranges, rescales rates when units == "kappa", and resolves nothing
/// else. Raises ConfigError.
ScenarioConfig resolve(ScenarioConfig config);

Json to_json(const ScenarioConfig& config);

/// Preset name or path to a theta,phi CSV file.
SpherePath load_path(const std::string& spec);

ScanRange parse_range(const std::string& text);

}  // namespace oamopo::cli
