#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>

#include "hotgate/channel_fidelity.hpp"
#include "hotgate/geometry.hpp"

namespace hotgate {

/// Per-particle mechanical basis {|00>, |01>, |10>}: index 0, 1, 2 with
/// (m_x, n_y) = (0,0), (0,1), (1,0).
inline constexpr int kMechLevels = 3;
inline constexpr std::array<int, 3> kLevelX{0, 0, 1};
inline constexpr std::array<int, 3> kLevelY{0, 1, 0};

struct LatticeConfig {
  std::size_t n_per_module = 1;
  double omega = 30.0;
  double dx = 2.0;
  double dy = 2.0;
  LogicalVector a;
  LogicalVector b;
  CouplingLaw law;
  std::size_t dimension_cap = 729;
  int quadrature_order = 24;  // Gauss-Hermite nodes per coordinate

  /// Trivial encoding of size n.
  static LatticeConfig with_size(std::size_t n, double omega, double dx, double dy, CouplingLaw law);
  void validate() const;
  std::size_t mechanical_dimension() const;
  /// r0_i = (0, i dy), q0_i = (dx, i dy) for i = 1..N.
  SpatialVector site_a(std::size_t i) const;
  SpatialVector site_b(std::size_t j) const;
};

/// Unit-trace Hermitian positive density matrix on the mechanical space.
class MechanicalState {
 public:
  explicit MechanicalState(MatrixXc density, double tol = 1e-12);
  static MechanicalState maximally_mixed(std::size_t dim);

  const MatrixXc& density() const noexcept { return density_; }
  std::size_t dimension() const noexcept { return std::size_t(density_.rows()); }

 private:
  MatrixXc density_;
};

/// <alpha beta| mu(p1 + d1, p2 + d2) |alpha' beta'> on two particles' 3-level bases, index
/// alpha * 3 + beta, by tensor Gauss-Hermite quadrature over the four displacements.
Eigen::MatrixXd pair_coupling_operator(const LatticeConfig& config, const SpatialVector& p1,
                                       const SpatialVector& p2, int order = 0);

/// Coupling operator between particle i of A and j of B (0-based).
Eigen::MatrixXd coupling_operator(const LatticeConfig& config, std::size_t i, std::size_t j,
                                  int order = 0);

/// Logical-basis blocks H_s, s = 2 i + j in {00, 01, 10, 11}.
struct LatticeHamiltonian {
  std::array<Eigen::MatrixXd, 4> blocks;
  Eigen::VectorXd mechanical_energies;  // diagonal of H_m
};

LatticeHamiltonian build_hamiltonian(const LatticeConfig& config);

/// exp(-i H t) from one eigendecomposition of a real symmetric block.
class BlockPropagator {
 public:
  explicit BlockPropagator(const Eigen::MatrixXd& h);

  const Eigen::VectorXd& energies() const noexcept { return energies_; }
  const Eigen::MatrixXd& vectors() const noexcept { return vectors_; }
  MatrixXc propagator(double t) const;
  MatrixXc evolve(const MatrixXc& rho, double t) const;

 private:
  Eigen::VectorXd energies_;
  Eigen::MatrixXd vectors_;
};

/// Logical channel of a ZZ-type coupling to a mechanical system. Logical states with
/// ZZ parity sigma evolve under h_plus or h_minus; the mechanical factor starts in rho.
class BlockChannelEvolver {
 public:
  BlockChannelEvolver(const Eigen::MatrixXd& h_plus, const Eigen::MatrixXd& h_minus,
                      const MatrixXc& rho);

  /// tr_m[U_sigma rho U_sigma2^dagger] for sigma, sigma2 in {+1, -1}.
  cdouble coherence(int sigma, int sigma2, double t) const;
  TwoQubitChannel channel(double t) const;
  const BlockPropagator& block(int sigma) const { return sigma > 0 ? plus_ : minus_; }

 private:
  BlockPropagator plus_;
  BlockPropagator minus_;
  // per (sigma, sigma2): (V_s^dag rho V_s2) o (V_s2^dag V_s)^T
  std::array<MatrixXc, 4> a_;
};

TwoQubitChannel evolve_channel(const LatticeConfig& config, const MechanicalState& rho_m, GateTime t);
double lattice_fidelity(const LatticeConfig& config, const MechanicalState& rho_m, GateTime t);

}  // namespace hotgate
