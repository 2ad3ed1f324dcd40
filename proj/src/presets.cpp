#include "hotgate/presets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "hotgate/errors.hpp"

namespace hotgate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ParamSpec {
  const char* key;
  bool required;
  double fallback;
  double lo;
  double hi;
  bool lo_open = false;
  bool hi_open = false;
  bool integer = false;
};

// shorthands for the tables below
ParamSpec req(const char* k, double lo, double hi, bool lo_open = false) { return {k, true, 0, lo, hi, lo_open}; }
ParamSpec req_int(const char* k, double lo, double hi) { return {k, true, 0, lo, hi, false, false, true}; }
ParamSpec opt(const char* k, double def, double lo, double hi) { return {k, false, def, lo, hi}; }
ParamSpec opt_int(const char* k, double def, double lo, double hi) { return {k, false, def, lo, hi, false, false, true}; }

const ParamSpec kJ = req("J", 0, kInf);
const ParamSpec kGamma = req_int("gamma", 1, 12);
const ParamSpec kSigma = req("sigma", 0, kInf);
const ParamSpec kDx = req("dx", 0, kInf, true);
const ParamSpec kDy = req("dy", 0, kInf, true);
const ParamSpec kDz = req("dz", 0, kInf);
const ParamSpec kOrder = opt_int("order", 0, 0, 100000);
const ParamSpec kTemp = req("T", 0, kInf, true);
const ParamSpec kEps{"epsilon", true, 0, 0, 1, true, true};
const ParamSpec kLength = req("L", 0, kInf, true);
const ParamSpec kPairOrder = opt_int("order", 8, 1, 64);
const ParamSpec kDiscard = opt("max_discarded", 1e-6, 0, 1);

const std::vector<ParamSpec>& specs_for(const std::string& scenario) {
  static const std::map<std::string, std::vector<ParamSpec>> table = {
      {"cold_mediator_1d", {kJ, kGamma, kSigma, kDx, kDy, req_int("N_A", 1, 64), kOrder}},
      {"cold_mediator_2d", {kJ, kGamma, kSigma, kDx, kDy, kDz, req_int("N_A", 1, 9), kOrder}},
      {"collective_1d", {kJ, kGamma, kSigma, kDx, kDy, req_int("N_A", 1, 64), req_int("N_B", 1, 64), kOrder}},
      {"collective_2d", {kJ, kGamma, kSigma, kDx, kDy, kDz, req_int("N_A", 1, 8), req_int("N_B", 1, 8), kOrder}},
      {"independent_discrete",
       {kJ, kGamma, kDx, kDy, req("step", 0, kInf), opt("p0", 0.5, 0, 1), req_int("N_A", 1, 32),
        req_int("N_B", 1, 32)}},
      {"paul_single",
       {kJ, kGamma, req("omega", 0, kInf, true), kLength, kTemp, kEps, req_int("K", 2, 12), kPairOrder, kDiscard}},
      {"paul_cold",
       {kJ, kGamma, req("omega_a", 0, kInf, true), req("omega_b", 0, kInf, true), kLength, kDy, kTemp, kEps,
        req_int("N_A", 1, 12), kPairOrder, kDiscard}},
      {"paul_twin",
       {kJ, kGamma, req("omega_a", 0, kInf, true), req("omega_b", 0, kInf, true), kLength, kDy, kTemp, kEps,
        req_int("N_A", 1, 12), req_int("N_B", 1, 12), kPairOrder, kDiscard}},
      {"lattice_2d",
       {kJ, kGamma, req("omega", 0, kInf, true), kDx, kDy, req_int("N", 1, 3), opt_int("order", 24, 2, 200)}},
      {"echo_check", {opt_int("K", 4, 2, 6), opt_int("instances", 20, 1, 100000)}},
  };
  const auto it = table.find(scenario);
  if (it == table.end()) {
    std::string names;
    for (auto s : kScenarios) names += (names.empty() ? "" : ", ") + std::string(s);
    throw ConfigError("unknown scenario '" + scenario + "' (expected one of " + names + ")");
  }
  return it->second;
}

std::string number(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

int line_of(const ScenarioConfig& c, const std::string& key) {
  const auto it = c.lines.find(key);
  return it == c.lines.end() ? 0 : it->second;
}

[[noreturn]] void fail(const ScenarioConfig& c, const std::string& key, const std::string& what) {
  const std::string where = c.preset.empty() ? "" : "preset " + c.preset + ": ";
  throw ConfigError(where + what, line_of(c, key));
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& key, const std::string& text, int line) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ConfigError(key + " must be a finite number (got '" + text + "')", line);
  return v;
}

}  // namespace

double ScenarioConfig::get(const std::string& key) const {
  const auto it = parameters.find(key);
  if (it == parameters.end()) throw ConfigError("missing parameter '" + key + "'");
  return it->second;
}

std::size_t ScenarioConfig::count(const std::string& key) const {
  return std::size_t(get(key));
}

ScenarioConfig ScenarioConfig::with(const std::string& key, double value) const {
  ScenarioConfig c = *this;
  c.parameters[key] = value;
  c.lines.erase(key);
  finalize(c);
  return c;
}

void finalize(ScenarioConfig& c) {
  if (c.scenario.empty()) throw ConfigError("missing key 'scenario'");
  const auto& specs = specs_for(c.scenario);
  for (const auto& [key, value] : c.parameters) {
    const bool known = std::any_of(specs.begin(), specs.end(), [&](const ParamSpec& s) { return key == s.key; });
    if (!known) fail(c, key, "unknown parameter '" + key + "' for scenario " + c.scenario);
  }
  for (const auto& s : specs) {
    auto it = c.parameters.find(s.key);
    if (it == c.parameters.end()) {
      if (s.required) fail(c, s.key, "missing parameter '" + std::string(s.key) + "' for scenario " + c.scenario);
      c.parameters[s.key] = s.fallback;
      continue;
    }
    const double v = it->second;
    const bool below = s.lo_open ? !(v > s.lo) : !(v >= s.lo);
    const bool above = s.hi_open ? !(v < s.hi) : !(v <= s.hi);
    if (below || above) {
      std::string range = std::string(s.lo_open ? "(" : "[") + number(s.lo) + ", " +
                          (s.hi == kInf ? "inf" : number(s.hi)) + (s.hi_open || s.hi == kInf ? ")" : "]");
      fail(c, s.key, std::string(s.key) + " must lie in " + range + " (got " + number(v) + ")");
    }
    if (s.integer && v != std::floor(v)) fail(c, s.key, std::string(s.key) + " must be an integer (got " + number(v) + ")");
  }
  if (c.scenario == "paul_twin" && c.parameters["N_A"] != c.parameters["N_B"])
    fail(c, "N_B", "paul_twin needs N_A = N_B");

  if (c.scenario != "echo_check") {
    if (!(c.dt_min > 0.0)) fail(c, "dt_min", "dt_min must be > 0 (got " + number(c.dt_min) + ")");
    if (!(c.dt_max > c.dt_min)) fail(c, "dt_max", "dt_max must exceed dt_min (got " + number(c.dt_max) + ")");
    if (c.points < 2 || c.points > 100000) fail(c, "points", "points must lie in [2, 100000]");
  }
  if (c.restarts < 1 || c.restarts > 1000) fail(c, "restarts", "restarts must lie in [1, 1000]");
  if (!(c.tolerance > 0.0)) fail(c, "tolerance", "tolerance must be > 0 (got " + number(c.tolerance) + ")");
  if (c.max_iters < 0) fail(c, "max_iters", "max_iters must be >= 0");
}

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig c;
  std::string section;
  std::map<std::string, int> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = std::min(text.find('\n', pos), text.size());
    std::string line(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) {
      if (nl == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header '" + line + "'", line_no);
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section != "parameters" && section != "grid" && section != "optimizer")
        throw ConfigError("unknown section [" + section + "]", line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value' (got '" + line + "')", line_no);
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError("expected 'key = value' (got '" + line + "')", line_no);
    const std::string qualified = section + "." + key;
    if (const auto prev = seen.find(qualified); prev != seen.end())
      throw ConfigError("duplicate key '" + key + "' (first set on line " + std::to_string(prev->second) + ")", line_no);
    seen[qualified] = line_no;
    c.lines[key] = line_no;

    if (section.empty()) {
      if (key == "scenario") {
        c.scenario = value;
      } else if (key == "seed") {
        std::uint64_t s = 0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), s);
        if (ec != std::errc() || ptr != value.data() + value.size())
          throw ConfigError("seed must be a non-negative integer (got '" + value + "')", line_no);
        c.seed = s;
      } else if (key == "output") {
        c.output = value;
      } else {
        throw ConfigError("unknown key '" + key + "' (expected scenario, seed or output)", line_no);
      }
    } else if (section == "parameters") {
      c.parameters[key] = parse_number(key, value, line_no);
    } else if (section == "grid") {
      const double v = parse_number(key, value, line_no);
      if (key == "dt_min") c.dt_min = v;
      else if (key == "dt_max") c.dt_max = v;
      else if (key == "points") {
        if (v != std::floor(v) || v < 0) throw ConfigError("points must be a non-negative integer", line_no);
        c.points = std::size_t(v);
      } else throw ConfigError("unknown grid key '" + key + "' (expected dt_min, dt_max or points)", line_no);
    } else {
      if (key == "warm_start") {
        if (value == "true" || value == "1") c.warm_start = true;
        else if (value == "false" || value == "0") c.warm_start = false;
        else throw ConfigError("warm_start must be true or false (got '" + value + "')", line_no);
        continue;
      }
      const double v = parse_number(key, value, line_no);
      if (key == "tolerance") {
        c.tolerance = v;
      } else if (key == "restarts" || key == "max_iters") {
        if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(key + " must be an integer", line_no);
        (key == "restarts" ? c.restarts : c.max_iters) = int(v);
      } else {
        throw ConfigError("unknown optimizer key '" + key + "' (expected restarts, tolerance, max_iters or warm_start)",
                          line_no);
      }
    }
    if (nl == text.size()) break;
  }
  finalize(c);
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(e.message(), e.line(), path);
  }
}

namespace {

Preset make(std::string name, std::string description, std::string scenario,
            std::map<std::string, double> params, double dt_min, double dt_max, std::size_t points,
            int restarts = 4, double tolerance = 1e-9, int max_iters = 0) {
  Preset p{std::move(name), std::move(description), {}};
  p.config.scenario = std::move(scenario);
  p.config.preset = p.name;
  p.config.parameters = std::move(params);
  p.config.dt_min = dt_min;
  p.config.dt_max = dt_max;
  p.config.points = points;
  p.config.restarts = restarts;
  p.config.tolerance = tolerance;
  p.config.max_iters = max_iters;
  finalize(p.config);
  return p;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> list = {
      make("fig2c", "cold mediator, 1D chain A and one Gaussian B qubit", "cold_mediator_1d",
           {{"J", 1}, {"gamma", 1}, {"sigma", 3}, {"dx", 1}, {"dy", 1}, {"N_A", 6}}, 1e-3, 1e1, 200),
      make("fig2f", "collective Gaussian noise, two 1D chains", "collective_1d",
           {{"J", 1}, {"gamma", 1}, {"sigma", 3}, {"dx", 1}, {"dy", 1}, {"N_A", 5}, {"N_B", 5}}, 1e-3, 1e1, 200),
      make("fig4b", "independent discrete y-noise, two 1D chains", "independent_discrete",
           {{"J", 1}, {"gamma", 1}, {"dx", 2}, {"dy", 4}, {"step", 1}, {"p0", 0.5}, {"N_A", 3}, {"N_B", 3}}, 1e-3,
           1e1, 200),
      make("fig6a", "one Paul trap split into A (first half) and B", "paul_single",
           {{"J", 1}, {"gamma", 3}, {"omega", 1}, {"L", 4.78}, {"T", 1.3}, {"epsilon", 0.07}, {"K", 6}}, 1e-1, 1e4,
           200),
      make("fig6b", "Paul trap A with a cold single-ion trap B", "paul_cold",
           {{"J", 1}, {"gamma", 3}, {"omega_a", 1}, {"omega_b", 0.01}, {"L", 15.97}, {"dy", 20}, {"T", 0.1},
            {"epsilon", 0.05}, {"N_A", 3}},
           1e1, 1e6, 200),
      make("fig6c", "two parallel Paul traps with N_A = N_B", "paul_twin",
           {{"J", 1}, {"gamma", 3}, {"omega_a", 1}, {"omega_b", 1.0 / 3.0}, {"L", 8.31}, {"dy", 2}, {"T", 0.2},
            {"epsilon", 0.01}, {"N_A", 3}, {"N_B", 3}},
           1e-2, 1e3, 200),
      make("fig7", "fully quantized 2D lattice, trivial encoding, maximally mixed mechanics", "lattice_2d",
           {{"J", 5}, {"gamma", 3}, {"omega", 30}, {"dx", 2}, {"dy", 2}, {"N", 2}}, 1e-3, 1e2, 200),
      make("appC", "cold mediator on a 3x3 lattice, B Gaussian in x and y", "cold_mediator_2d",
           {{"J", 1}, {"gamma", 1}, {"sigma", 1}, {"dx", 1}, {"dy", 1}, {"dz", 1}, {"N_A", 9}}, 1e-3, 1e1, 20, 2, 1e-7, 3000),
      make("appD", "collective Gaussian noise, two stacked 2D modules", "collective_2d",
           {{"J", 1}, {"gamma", 1}, {"sigma", 2}, {"dx", 1}, {"dy", 1}, {"dz", 1}, {"N_A", 8}, {"N_B", 8}}, 1e-3,
           1, 12, 2, 1e-7, 3000),
      make("echo_check", "background-field echo identity on random instances", "echo_check",
           {{"K", 4}, {"instances", 20}}, 1e-3, 1e2, 200),
  };
  return list;
}

ScenarioConfig preset_config(std::string_view name) {
  for (const auto& p : presets())
    if (p.name == name) return p.config;
  throw ConfigError("unknown preset '" + std::string(name) + "' (see 'hotgate presets')");
}

std::string list_presets() {
  std::ostringstream os;
  for (const auto& p : presets()) {
    os << p.name << "  " << p.description << "\n    scenario=" << p.config.scenario;
    for (const auto& [k, v] : p.config.parameters) os << ' ' << k << '=' << number(v);
    if (p.config.scenario != "echo_check")
      os << " dt=[" << number(p.config.dt_min) << ", " << number(p.config.dt_max) << "] points=" << p.config.points;
    os << '\n';
  }
  return os.str();
}

}  // namespace hotgate
