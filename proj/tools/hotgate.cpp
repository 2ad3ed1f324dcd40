#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "hotgate/errors.hpp"
#include "hotgate/presets.hpp"
#include "hotgate/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr double kEchoTolerance = 1e-10;

hotgate::ScenarioConfig load_any(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hotgate::ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw hotgate::ConfigError(path + ": invalid JSON: " + e.what());
    }
    return hotgate::config_from_json(j);
  }
  return hotgate::load_config(path);
}

int run_command(const std::string& config_path, const std::string& preset, const std::string& out,
                std::optional<std::uint64_t> seed) {
  if (config_path.empty() == preset.empty())
    throw hotgate::ConfigError("give either a config file or --preset <name>");
  hotgate::ScenarioConfig config = preset.empty() ? load_any(config_path) : hotgate::preset_config(preset);
  if (seed) config.seed = *seed;
  const std::string dir = !out.empty() ? out : (!config.output.empty() ? config.output : ".");
  const std::string stem = config.preset.empty() ? config.scenario : config.preset;

  std::filesystem::create_directories(dir);
  const hotgate::CurveRecord record = hotgate::run(config);
  hotgate::write_record(record, dir, stem);

  if (config.scenario == "echo_check") {
    double worst = 0.0;
    for (double r : record.echo_residuals) worst = std::max(worst, r);
    std::printf("echo_check: %zu instances, K=%g, max residual %.3e\n", record.echo_residuals.size(),
                config.get("K"), worst);
    if (!(worst < kEchoTolerance)) {
      std::fprintf(stderr, "echo residual %.3e exceeds %.0e\n", worst, kEchoTolerance);
      return kExitNumeric;
    }
    return 0;
  }
  std::printf("%s: %zu grid points in %.2f s -> %s/%s.csv\n", stem.c_str(), record.points.size(), record.wall_time,
              dir.c_str(), stem.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Encoded two-qubit gates under position noise: fidelity curves and checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", hotgate::kToolVersion);

  auto* presets_cmd = app.add_subcommand("presets", "List the built-in presets");
  auto* run_cmd = app.add_subcommand("run", "Run a scenario from a config file, sidecar or preset");
  std::string config_path, preset, out;
  std::optional<std::uint64_t> seed;
  run_cmd->add_option("config", config_path, "Config file (key = value sections) or JSON sidecar");
  run_cmd->add_option("--preset", preset, "Built-in preset name");
  run_cmd->add_option("--out", out, "Output directory");
  run_cmd->add_option("--seed", seed, "Seed override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*presets_cmd) {
      std::cout << hotgate::list_presets();
      return 0;
    }
    return run_command(config_path, preset, out, seed);
  } catch (const hotgate::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const hotgate::ValidationError& e) {
    std::fprintf(stderr, "invalid configuration: %s\n", e.what());
    return kExitConfig;
  } catch (const hotgate::SizeError& e) {
    std::fprintf(stderr, "size limit: %s\n", e.what());
    return kExitConfig;
  } catch (const hotgate::Error& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
