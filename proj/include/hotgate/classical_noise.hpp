#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hotgate/geometry.hpp"
#include "hotgate/parallel.hpp"

namespace hotgate {

struct CouplingNode {
  double mu_bar = 0.0;
  double weight = 0.0;
};

/// Discretized law of the logical coupling strength.
struct CouplingDistribution {
  std::vector<CouplingNode> nodes;
  bool exact = false;  // exhaustive enumeration rather than quadrature

  double total_weight() const;
  double mean() const;
};

/// Default panel counts of the Gaussian rules (8 Gauss-Legendre nodes per panel).
inline constexpr int kDefaultOrder1D = 400;
inline constexpr int kDefaultOrder2D = 60;

/// Fixed module A plus one B qubit whose position is Gaussian around `center`
/// along `noisy_axes`.
struct ColdMediatorModel {
  ModuleLayout chain;
  SpatialVector center;
  double sigma = 0.0;
  std::vector<int> noisy_axes{0};

  /// Chain r_i = (i dx, 0), B at (q_x, dy) with q_x ~ N((n_a - 1) dx / 2, sigma^2).
  static ColdMediatorModel chain_1d(std::size_t n_a, double dx, double dy, double sigma);
  void validate() const;
};

/// Both modules displaced rigidly by i.i.d. Gaussian vectors on `noisy_axes`.
struct CollectiveGaussianModel {
  ModuleLayout layout_a;
  ModuleLayout layout_b;
  double sigma = 0.0;
  std::vector<int> noisy_axes{0};

  /// Chains r_i = (i dx, 0) and q_j = (j dx, dy).
  static CollectiveGaussianModel chains_1d(std::size_t n_a, std::size_t n_b, double dx, double dy,
                                           double sigma);
  void validate() const;
};

struct Displacement {
  SpatialVector offset;
  double probability = 0.0;
};

/// Every qubit is displaced independently by a draw from the same discrete law.
struct IndependentDiscreteModel {
  ModuleLayout layout_a;
  ModuleLayout layout_b;
  std::vector<Displacement> displacements;
  std::uint64_t enumeration_cap = 10'000'000;

  /// Chains r_i = (i dx, dy), q_j = (j dx, 0) with y-jitter in {-step, 0, step}
  /// of probabilities {(1 - p0) / 2, p0, (1 - p0) / 2}.
  static IndependentDiscreteModel chains_1d(std::size_t n_a, std::size_t n_b, double dx, double dy,
                                            double step, double p0);
  void validate() const;
};

/// Per-node couplings for every distinct pair geometry ("column"); contracting with a, b
/// gives the logical coupling at each node. Cheap to re-evaluate for new encodings.
struct CouplingTable {
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  std::size_t n_columns = 0;
  std::vector<std::size_t> column_of_pair;  // index i * n_b + j
  std::vector<double> weights;
  std::vector<double> values;  // node-major, n_columns per node
  bool exact = false;

  std::size_t size() const noexcept { return weights.size(); }
  std::vector<double> column_coefficients(std::span<const double> a, std::span<const double> b) const;
  double mu_bar(std::size_t node, std::span<const double> coeff) const {
    const double* row = values.data() + node * n_columns;
    double s = 0.0;
    for (std::size_t c = 0; c < n_columns; ++c) s += coeff[c] * row[c];
    return s;
  }
  CouplingDistribution distribution(std::span<const double> a, std::span<const double> b) const;
  /// sum_k w_k cos^2(pi/4 - mu_k dt); same blocks as zz_damping_fidelity.
  double fidelity(std::span<const double> a, std::span<const double> b, double dt,
                  Exec exec = Exec::serial) const;
};

/// resolve_dt > 0 narrows panels where sin(2 mu dt) oscillates quickly for dt up to
/// resolve_dt, so the rule stays accurate over that whole range of interaction times.
CouplingTable table_cold_mediator(const ColdMediatorModel& model, const CouplingLaw& law,
                                  int order = 0, Exec exec = Exec::serial, double resolve_dt = 0.0);
CouplingTable table_collective(const CollectiveGaussianModel& model, const CouplingLaw& law,
                               int order = 0, Exec exec = Exec::serial, double resolve_dt = 0.0);

/// Pair lookup tables of the independent model; fidelity factorizes over A's qubits for
/// each configuration of B, so no exhaustive enumeration is needed.
struct IndependentTable {
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  std::size_t kappa = 0;
  std::vector<double> probabilities;
  std::vector<double> pair_values;  // [(i * n_b + j) * kappa + k] * kappa + l

  double pair(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return pair_values[((i * n_b + j) * kappa + k) * kappa + l];
  }
  double fidelity(std::span<const double> a, std::span<const double> b, double dt,
                  Exec exec = Exec::serial) const;
};

IndependentTable table_independent(const IndependentDiscreteModel& model, const CouplingLaw& law);

/// `order` is the panel count per noisy axis (0 selects the default).
CouplingDistribution distribution_cold_mediator(const ColdMediatorModel& model, const LogicalVector& a,
                                                double b1, const CouplingLaw& law, int order = 0);
CouplingDistribution distribution_collective(const CollectiveGaussianModel& model,
                                             const LogicalVector& a, const LogicalVector& b,
                                             const CouplingLaw& law, int order = 0);
/// Exhaustive enumeration of all kappa^(N_A + N_B) configurations.
CouplingDistribution distribution_independent(const IndependentDiscreteModel& model,
                                              const LogicalVector& a, const LogicalVector& b,
                                              const CouplingLaw& law, Exec exec = Exec::serial);

/// n i.i.d. draws of the logical coupling. Draw k uses its own counter stream, so the
/// result does not depend on exec.
std::vector<double> sample_coupling(const ColdMediatorModel& model, const LogicalVector& a, double b1,
                                    const CouplingLaw& law, std::uint64_t seed, std::size_t n,
                                    Exec exec = Exec::serial);
std::vector<double> sample_coupling(const CollectiveGaussianModel& model, const LogicalVector& a,
                                    const LogicalVector& b, const CouplingLaw& law,
                                    std::uint64_t seed, std::size_t n, Exec exec = Exec::serial);
std::vector<double> sample_coupling(const IndependentDiscreteModel& model, const LogicalVector& a,
                                    const LogicalVector& b, const CouplingLaw& law,
                                    std::uint64_t seed, std::size_t n, Exec exec = Exec::serial);

}  // namespace hotgate
