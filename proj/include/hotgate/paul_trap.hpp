#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hotgate/classical_noise.hpp"
#include "hotgate/channel_fidelity.hpp"
#include "hotgate/geometry.hpp"
#include "hotgate/parallel.hpp"

namespace hotgate {

inline constexpr std::size_t kMaxChainIons = 12;

struct TrapSpec {
  std::size_t n_ions = 1;
  double omega = 1.0;
  double length_scale = 1.0;  // L with L^3 = chi / omega^2

  void validate() const;
};

/// Dimensionless equilibrium of the chain potential sum x^2/2 + sum_{i<j} 1/|x_i - x_j|.
std::vector<double> equilibrium_positions(std::size_t K);

/// Hessian of the dimensionless potential at the given positions.
Eigen::MatrixXd chain_hessian(std::span<const double> x);

struct ModeDecomposition {
  std::vector<double> equilibrium;  // L * xbar, ascending
  std::vector<double> lambdas;      // ascending
  Eigen::MatrixXd mode_vectors;     // column m is v^(m); first significant entry positive
  std::vector<double> frequencies;  // sqrt(lambda_m) * omega
  double reconstruction_error = 0.0;
};

ModeDecomposition mode_decomposition(const TrapSpec& spec);

struct ThermalState {
  std::vector<int> occupation;
  double energy = 0.0;
  double probability = 0.0;
};

struct ThermalTruncation {
  double temperature = 0.0;
  double epsilon = 0.0;
  std::vector<ThermalState> states;  // ascending energy; probabilities sum to 1
  double retained_mass = 0.0;        // pre-normalization fraction of the partition function
};

/// Lowest-energy occupation vectors until their Boltzmann mass reaches (1 - epsilon) Z.
ThermalTruncation thermal_truncation(std::span<const double> frequencies, double T, double epsilon,
                                     std::size_t cap = 1'000'000);
ThermalTruncation thermal_truncation(const ModeDecomposition& modes, double T, double epsilon,
                                     std::size_t cap = 1'000'000);
ThermalTruncation thermal_truncation(const ModeDecomposition& modes_a, const ModeDecomposition& modes_b,
                                     double T, double epsilon, std::size_t cap = 1'000'000);

enum class TrapVariant { single_trap_split, cold_mediator, twin_traps };

struct TrapPairConfig {
  TrapVariant variant = TrapVariant::single_trap_split;
  TrapSpec trap_a;
  std::optional<TrapSpec> trap_b;
  double dy = 0.0;
  LogicalVector a;
  LogicalVector b;
  CouplingLaw law;

  /// K ions in one trap; A is the first ceil(K/2) ions, B the rest.
  static TrapPairConfig single_trap(std::size_t K, double omega, double L, CouplingLaw law);
  /// N_A ions in trap A, one ion in trap B (frequency omega_b), traps dy apart.
  static TrapPairConfig cold_mediator(std::size_t n_a, double omega_a, double omega_b, double L,
                                      double dy, CouplingLaw law);
  /// N ions in each trap with a shared length scale.
  static TrapPairConfig twin_traps(std::size_t n, double omega_a, double omega_b, double L, double dy,
                                   CouplingLaw law);

  std::size_t size_a() const;
  std::size_t size_b() const;
  void validate() const;
};

/// Separation of one ion pair, d0 + sum_m c_m u_m along the trap axis, at transverse
/// offset `transverse`; u_m are the joint mode coordinates.
struct PairGeometry {
  double d0 = 0.0;
  double transverse = 0.0;
  std::vector<double> c;
};

/// Joint modes (A's, then B's) and the pair geometries of a configuration.
struct TrapSystem {
  TrapPairConfig config;
  ModeDecomposition modes_a;
  std::optional<ModeDecomposition> modes_b;
  std::vector<double> frequencies;
  std::vector<PairGeometry> cross;   // index i * n_b + j
  std::vector<PairGeometry> self_a;  // pairs i < i' in A
  std::vector<PairGeometry> self_b;  // pairs j < j' in B
  double guard = 0.0;                // excluded approach distance for same-line pairs
};

TrapSystem build_trap_system(const TrapPairConfig& config);

struct PairExpectation {
  double value = 0.0;
  double discarded_mass = 0.0;  // probability inside the same-line guard region
};

/// Panel order default of the separation-density rule.
inline constexpr int kDefaultPairOrder = 8;

/// Thermal-state expectation of J (s^2 + transverse^2)^(-gamma/2) for s = d0 + c.u, with u
/// distributed as |Psi_n(u)|^2 per mode. The separation density comes from its
/// characteristic function; `order` is the Gauss-Legendre node count per panel.
PairExpectation pair_expectation(const PairGeometry& pair, const CouplingLaw& law,
                                 std::span<const double> frequencies, std::span<const int> occupation,
                                 double guard, int order = kDefaultPairOrder);

/// sum_ij a_i b_j <E_k| mu(r_i, q_j) |E_k> for the configuration's encodings.
double diagonal_mode_coupling(const TrapSystem& system, std::span<const int> occupation,
                              int order = kDefaultPairOrder);

struct PaulTableOptions {
  double temperature = 0.1;
  double epsilon = 0.05;
  int order = kDefaultPairOrder;
  bool include_self = false;
  std::size_t state_cap = 1'000'000;
  double max_discarded_mass = 1e-6;
  Exec exec = Exec::serial;
};

/// Per-thermal-state couplings: the cross table drives the gate, the self tables hold the
/// intra-module diagonal couplings (state-major, one column per pair).
struct PaulTable {
  CouplingTable cross;
  std::vector<double> self_a;
  std::vector<double> self_b;
  std::size_t self_a_pairs = 0;
  std::size_t self_b_pairs = 0;
  ThermalTruncation thermal;
  double max_discarded_mass = 0.0;
  double min_level_spacing = 0.0;  // smallest joint mode frequency
};

PaulTable build_paul_table(const TrapSystem& system, const PaulTableOptions& options);

/// Ratio of the smallest mode frequency to the largest |mu_k| for the given encodings;
/// the diagonal treatment needs it well above 1.
double scale_separation(const PaulTable& table, std::span<const double> a, std::span<const double> b);

/// Fidelity with every thermal branch k acquiring the phase of its diagonal energy
/// sigma mu_k + (mu^a_k + mu^b_k when include_self), through the Choi construction.
double nondegenerate_fidelity(const PaulTable& table, std::span<const double> a,
                              std::span<const double> b, GateTime t, bool include_self);

/// Convenience: full pipeline from a configuration, using its encodings.
double nondegenerate_fidelity(const TrapPairConfig& config, double T, double epsilon, GateTime t);

/// Exact two-block Hamiltonians of twin traps with one ion each, on Fock states up to
/// n_max per trap: H_sigma = H_m + sigma a_1 b_1 mu_hat. Basis index m * (n_max + 1) + n.
std::array<Eigen::MatrixXd, 2> twin_trap_fock_blocks(const TrapSystem& system, int n_max,
                                                     int quadrature_order = 80);

/// Diagonal thermal state of a truncation on the same Fock basis.
MatrixXc fock_thermal_state(const ThermalTruncation& thermal, int n_max);

}  // namespace hotgate
