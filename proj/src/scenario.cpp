#include "hotgate/scenario.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <unistd.h>

#include "hotgate/channel_fidelity.hpp"
#include "hotgate/classical_noise.hpp"
#include "hotgate/errors.hpp"
#include "hotgate/lattice_quantized.hpp"
#include "hotgate/paul_trap.hpp"
#include "hotgate/rng.hpp"

namespace hotgate {

namespace {

// 3x3 lattice of module A for the 2D cold mediator, in units of (dx, dy)
constexpr std::array<std::array<int, 2>, 9> kColdLattice = {
    {{1, 1}, {2, 1}, {1, 2}, {0, 1}, {1, 0}, {2, 2}, {0, 0}, {0, 2}, {2, 0}}};
// eight sites of each stacked module for 2D collective noise
constexpr std::array<std::array<int, 2>, 8> kStackedLattice = {
    {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}, {0, 2}, {1, 2}}};

CouplingLaw law_of(const ScenarioConfig& c) { return CouplingLaw(c.get("J"), int(c.get("gamma"))); }

int order_of(const ScenarioConfig& c) { return int(c.get("order")); }

TrapPairConfig trap_config(const ScenarioConfig& c) {
  const CouplingLaw law = law_of(c);
  if (c.scenario == "paul_single") return TrapPairConfig::single_trap(c.count("K"), c.get("omega"), c.get("L"), law);
  if (c.scenario == "paul_cold")
    return TrapPairConfig::cold_mediator(c.count("N_A"), c.get("omega_a"), c.get("omega_b"), c.get("L"), c.get("dy"), law);
  return TrapPairConfig::twin_traps(c.count("N_A"), c.get("omega_a"), c.get("omega_b"), c.get("L"), c.get("dy"), law);
}

std::vector<double> echo_run(const ScenarioConfig& c) {
  const std::size_t K = c.count("K");
  const double taus[] = {0.1, 1.0, std::numbers::pi};
  std::vector<double> out;
  for (std::size_t n = 0; n < c.count("instances"); ++n) {
    CounterRng rng(c.seed, n);
    EchoSpec spec;
    spec.tau = taus[n % 3];
    for (std::size_t k = 0; k < K; ++k) spec.fields.push_back(2.0 * rng.uniform() - 1.0);
    Eigen::MatrixXd hzz = Eigen::MatrixXd::Zero(Eigen::Index(K), Eigen::Index(K));
    for (Eigen::Index i = 0; i < Eigen::Index(K); ++i)
      for (Eigen::Index j = i + 1; j < Eigen::Index(K); ++j) hzz(i, j) = hzz(j, i) = rng.normal();
    out.push_back(echo_residual(spec, hzz, K));
  }
  return out;
}

std::vector<CurvePoint> lattice_run(const ScenarioConfig& c, const std::vector<double>& grid) {
  LatticeConfig lc = LatticeConfig::with_size(c.count("N"), c.get("omega"), c.get("dx"), c.get("dy"), law_of(c));
  lc.quadrature_order = order_of(c);
  lc.validate();
  const LatticeHamiltonian h = build_hamiltonian(lc);
  const MechanicalState rho = MechanicalState::maximally_mixed(lc.mechanical_dimension());
  const BlockChannelEvolver ev(h.blocks[0], h.blocks[1], rho.density());
  std::vector<CurvePoint> points;
  for (double dt : grid) {
    CurvePoint p;
    p.delta_t = dt;
    p.fidelity = p.trivial_fidelity = choi_fidelity(ev.channel(dt), std::numbers::pi / 4.0);
    p.a = lc.a;
    p.b = lc.b;
    points.push_back(std::move(p));
  }
  return points;
}

std::string join(const LogicalVector& v) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ";" : "") << v[i];
  return os.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

std::unique_ptr<FidelityModel> build_fidelity_model(const ScenarioConfig& c, Exec exec) {
  const std::string& s = c.scenario;
  if (s == "cold_mediator_1d") {
    const auto model = ColdMediatorModel::chain_1d(c.count("N_A"), c.get("dx"), c.get("dy"), c.get("sigma"));
    return std::make_unique<TableFidelityModel>(table_cold_mediator(model, law_of(c), order_of(c), exec, c.dt_max), exec);
  }
  if (s == "cold_mediator_2d") {
    std::vector<SpatialVector> sites;
    for (std::size_t i = 0; i < c.count("N_A"); ++i)
      sites.push_back({kColdLattice[i][0] * c.get("dx"), kColdLattice[i][1] * c.get("dy"), 0.0});
    ColdMediatorModel model{ModuleLayout(sites), SpatialVector{c.get("dx"), c.get("dy"), c.get("dz")}, c.get("sigma"), {0, 1}};
    return std::make_unique<TableFidelityModel>(table_cold_mediator(model, law_of(c), order_of(c), exec, c.dt_max), exec);
  }
  if (s == "collective_1d") {
    const auto model =
        CollectiveGaussianModel::chains_1d(c.count("N_A"), c.count("N_B"), c.get("dx"), c.get("dy"), c.get("sigma"));
    return std::make_unique<TableFidelityModel>(table_collective(model, law_of(c), order_of(c), exec, c.dt_max), exec);
  }
  if (s == "collective_2d") {
    std::vector<SpatialVector> ra, qb;
    for (std::size_t i = 0; i < c.count("N_A"); ++i)
      ra.push_back({kStackedLattice[i][0] * c.get("dx"), kStackedLattice[i][1] * c.get("dy"), c.get("dz")});
    for (std::size_t j = 0; j < c.count("N_B"); ++j)
      qb.push_back({kStackedLattice[j][0] * c.get("dx"), kStackedLattice[j][1] * c.get("dy"), 0.0});
    CollectiveGaussianModel model{ModuleLayout(ra), ModuleLayout(qb), c.get("sigma"), {0, 1}};
    return std::make_unique<TableFidelityModel>(table_collective(model, law_of(c), order_of(c), exec, c.dt_max), exec);
  }
  if (s == "independent_discrete") {
    const auto model = IndependentDiscreteModel::chains_1d(c.count("N_A"), c.count("N_B"), c.get("dx"), c.get("dy"),
                                                           c.get("step"), c.get("p0"));
    return std::make_unique<IndependentFidelityModel>(table_independent(model, law_of(c)), exec);
  }
  if (s == "paul_single" || s == "paul_cold" || s == "paul_twin") {
    const TrapSystem sys = build_trap_system(trap_config(c));
    PaulTableOptions opt;
    opt.temperature = c.get("T");
    opt.epsilon = c.get("epsilon");
    opt.order = order_of(c);
    opt.max_discarded_mass = c.get("max_discarded");
    opt.exec = exec;
    return std::make_unique<TableFidelityModel>(build_paul_table(sys, opt).cross, exec);
  }
  throw ValidationError("scenario " + s + " has no classical fidelity model");
}

OptimizationConfig optimization_config(const ScenarioConfig& c) {
  OptimizationConfig o;
  o.dt_grid = log_grid(c.dt_min, c.dt_max, c.points);
  o.restarts = c.restarts;
  o.tolerance = c.tolerance;
  o.max_iters = c.max_iters;
  o.warm_start = c.warm_start;
  o.seed = c.seed;
  return o;
}

CurveRecord run(const ScenarioConfig& config, Exec exec) {
  const auto start = std::chrono::steady_clock::now();
  CurveRecord rec;
  rec.config = config;
  if (config.scenario == "echo_check") {
    rec.echo_residuals = echo_run(config);
  } else if (config.scenario == "lattice_2d") {
    rec.points = lattice_run(config, log_grid(config.dt_min, config.dt_max, config.points));
  } else {
    const auto model = build_fidelity_model(config, exec);
    rec.points = infidelity_curve(*model, optimization_config(config)).points;
  }
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::string curve_csv(const CurveRecord& record) {
  std::ostringstream os;
  os.precision(17);
  os << "delta_t,infidelity_trivial,infidelity_optimized,encoding_a,encoding_b\n";
  for (const auto& p : record.points)
    os << p.delta_t << ',' << 1.0 - p.trivial_fidelity << ',' << 1.0 - p.fidelity << ',' << join(p.a) << ','
       << join(p.b) << '\n';
  return os.str();
}

nlohmann::json record_json(const CurveRecord& record) {
  const ScenarioConfig& c = record.config;
  nlohmann::json j;
  j["tool"] = "hotgate";
  j["version"] = kToolVersion;
  j["preset"] = c.preset;
  j["scenario"] = c.scenario;
  j["seed"] = c.seed;
  j["parameters"] = c.parameters;
  j["grid"] = {{"dt_min", c.dt_min}, {"dt_max", c.dt_max}, {"points", c.points}};
  j["optimizer"] = {{"restarts", c.restarts},
                    {"tolerance", c.tolerance},
                    {"max_iters", c.max_iters},
                    {"warm_start", c.warm_start}};
  j["wall_time_s"] = record.wall_time;
  if (c.scenario == "echo_check") {
    j["echo_residuals"] = record.echo_residuals;
    double worst = 0.0;
    for (double r : record.echo_residuals) worst = std::max(worst, r);
    j["max_residual"] = worst;
    return j;
  }
  auto& pts = j["points"] = nlohmann::json::array();
  for (const auto& p : record.points)
    pts.push_back({{"delta_t", p.delta_t},
                   {"fidelity_trivial", p.trivial_fidelity},
                   {"fidelity_optimized", p.fidelity},
                   {"encoding_a", p.a.entries()},
                   {"encoding_b", p.b.entries()}});
  return j;
}

ScenarioConfig config_from_json(const nlohmann::json& j) {
  ScenarioConfig c;
  try {
    c.scenario = j.at("scenario").get<std::string>();
    c.preset = j.value("preset", std::string());
    c.seed = j.value("seed", std::uint64_t{0});
    c.parameters = j.at("parameters").get<std::map<std::string, double>>();
    const auto& g = j.at("grid");
    c.dt_min = g.at("dt_min").get<double>();
    c.dt_max = g.at("dt_max").get<double>();
    c.points = g.at("points").get<std::size_t>();
    const auto& o = j.at("optimizer");
    c.restarts = o.at("restarts").get<int>();
    c.tolerance = o.at("tolerance").get<double>();
    c.max_iters = o.at("max_iters").get<int>();
    c.warm_start = o.at("warm_start").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed sidecar: ") + e.what());
  }
  finalize(c);
  return c;
}

void write_record(const CurveRecord& record, const std::filesystem::path& dir, const std::string& stem) {
  std::filesystem::create_directories(dir);
  if (record.config.scenario != "echo_check") write_atomic(dir / (stem + ".csv"), curve_csv(record));
  write_atomic(dir / (stem + ".json"), record_json(record).dump(2) + "\n");
}

}  // namespace hotgate
