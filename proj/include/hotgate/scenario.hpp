#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "hotgate/encoding_optimizer.hpp"
#include "hotgate/parallel.hpp"
#include "hotgate/presets.hpp"

namespace hotgate {

inline constexpr const char* kToolVersion = "1.0.0";

struct CurveRecord {
  ScenarioConfig config;
  std::vector<CurvePoint> points;
  std::vector<double> echo_residuals;  // echo_check only
  double wall_time = 0.0;
};

/// Fidelity model of a classical or Paul-trap scenario.
std::unique_ptr<FidelityModel> build_fidelity_model(const ScenarioConfig& config, Exec exec = Exec::parallel);

OptimizationConfig optimization_config(const ScenarioConfig& config);

CurveRecord run(const ScenarioConfig& config, Exec exec = Exec::parallel);

std::string curve_csv(const CurveRecord& record);
nlohmann::json record_json(const CurveRecord& record);
/// Rebuilds the configuration embedded in a sidecar.
ScenarioConfig config_from_json(const nlohmann::json& j);

/// Writes <stem>.csv (curve scenarios) and <stem>.json into dir, each via temp file + rename.
void write_record(const CurveRecord& record, const std::filesystem::path& dir, const std::string& stem);

}  // namespace hotgate
