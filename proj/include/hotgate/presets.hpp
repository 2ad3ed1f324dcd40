#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hotgate {

inline constexpr std::string_view kScenarios[] = {
    "cold_mediator_1d", "cold_mediator_2d", "collective_1d", "collective_2d", "independent_discrete",
    "paul_single",      "paul_cold",        "paul_twin",     "lattice_2d",    "echo_check"};

struct ScenarioConfig {
  std::string scenario;
  std::string preset;  // empty unless loaded by name
  std::map<std::string, double> parameters;
  double dt_min = 1e-3;
  double dt_max = 1e2;
  std::size_t points = 200;
  int restarts = 4;
  double tolerance = 1e-9;
  int max_iters = 0;
  bool warm_start = true;
  std::uint64_t seed = 0;
  std::string output;
  std::map<std::string, int> lines;  // key -> source line, for messages

  double get(const std::string& key) const;
  std::size_t count(const std::string& key) const;
  /// Copy with one parameter replaced, re-validated.
  ScenarioConfig with(const std::string& key, double value) const;
};

/// Checks scenario-specific keys and ranges and fills optional keys with their defaults.
/// Throws ConfigError naming the key and, for parsed files, its line.
void finalize(ScenarioConfig& config);

/// Flat key = value text with [parameters], [grid] and [optimizer] sections; '#' comments.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::string& path);

struct Preset {
  std::string name;
  std::string description;
  ScenarioConfig config;
};

const std::vector<Preset>& presets();
ScenarioConfig preset_config(std::string_view name);
std::string list_presets();

}  // namespace hotgate
