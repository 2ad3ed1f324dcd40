#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hotgate/channel_fidelity.hpp"
#include "hotgate/errors.hpp"
#include "hotgate/lattice_quantized.hpp"

using namespace hotgate;

namespace {

LatticeConfig fig7(std::size_t n, double omega = 30.0, double J = 5.0) {
  return LatticeConfig::with_size(n, omega, 2.0, 2.0, CouplingLaw(J, 3));
}

}  // namespace

TEST_CASE("pair operator limits and symmetries") {
  const LatticeConfig c = fig7(1);
  const SpatialVector p1{0.0, 2.0}, p2{2.0, 2.0};
  const Eigen::MatrixXd op = pair_coupling_operator(c, p1, p2);
  CHECK((op - op.transpose()).cwiseAbs().maxCoeff() < 1e-12);

  // off-diagonal elements are first order in the zero-point spread 1/sqrt(2 omega)
  const LatticeConfig stiff = fig7(1, 1e14);
  const Eigen::MatrixXd frozen = pair_coupling_operator(stiff, p1, p2);
  const double mu = 5.0 / 8.0;
  CHECK((frozen - mu * Eigen::MatrixXd::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-6);

  // equal x offsets: x-excitation parity is conserved
  const Eigen::MatrixXd same_x = pair_coupling_operator(c, {0.0, 0.0}, {0.0, 2.0});
  for (int s = 0; s < 9; ++s)
    for (int t = 0; t < 9; ++t) {
      const int px = kLevelX[std::size_t(s / 3)] + kLevelX[std::size_t(s % 3)];
      const int qx = kLevelX[std::size_t(t / 3)] + kLevelX[std::size_t(t % 3)];
      if ((px + qx) % 2) CHECK(std::abs(same_x(s, t)) < 1e-14);
    }
}

TEST_CASE("block structure") {
  const LatticeConfig free = fig7(1, 30.0, 0.0);
  const LatticeHamiltonian h0 = build_hamiltonian(free);
  for (const auto& b : h0.blocks) {
    CHECK((b - Eigen::MatrixXd(h0.mechanical_energies.asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
  }
  const LatticeHamiltonian h = build_hamiltonian(fig7(1));
  CHECK(h.blocks[0] == h.blocks[3]);
  CHECK(h.blocks[1] == h.blocks[2]);
  for (const auto& b : h.blocks) CHECK((b - b.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  const BlockPropagator p(h.blocks[0]);
  const Eigen::MatrixXd rebuilt = p.vectors() * p.energies().asDiagonal() * p.vectors().transpose();
  CHECK((rebuilt - h.blocks[0]).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("channel limits") {
  const LatticeConfig c = fig7(1);
  const auto rho = MechanicalState::maximally_mixed(c.mechanical_dimension());
  const TwoQubitChannel id = evolve_channel(c, rho, 0.0);
  CHECK((id.choi() - TwoQubitChannel::zz_rotation(0.0).choi()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(lattice_fidelity(c, rho, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
  const LatticeConfig free = fig7(1, 30.0, 0.0);
  for (double t : {0.3, 1.0, 7.0}) CHECK(lattice_fidelity(free, rho, t) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("commuting limit gives a pure ZZ rotation") {
  Eigen::MatrixXd hp = Eigen::MatrixXd::Zero(3, 3), hm = hp;
  const double e[3] = {1.0, 2.0, 2.5}, mu[3] = {0.3, -0.4, 0.9};
  for (int k = 0; k < 3; ++k) {
    hp(k, k) = e[k] + mu[k];
    hm(k, k) = e[k] - mu[k];
  }
  MatrixXc rho = MatrixXc::Zero(3, 3);
  rho(1, 1) = 1.0;
  const BlockChannelEvolver ev(hp, hm, rho);
  const double t = 0.8;
  CHECK((ev.channel(t).choi() - TwoQubitChannel::zz_rotation(mu[1] * t).choi()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("stiff lattice matches the frozen classical gate") {
  const LatticeConfig c = fig7(1, 1e8);
  const auto rho = MechanicalState::maximally_mixed(c.mechanical_dimension());
  const double mu = 5.0 / 8.0;
  for (double t : {0.4, 1.2566, 3.0}) {
    const double cl = std::cos(std::numbers::pi / 4 - mu * t);
    CHECK(lattice_fidelity(c, rho, t) == doctest::Approx(cl * cl).epsilon(1e-4));
  }
}

TEST_CASE("valid channels for one and two particles per module") {
  for (std::size_t n : {1u, 2u}) {
    const LatticeConfig c = fig7(n);
    const auto rho = MechanicalState::maximally_mixed(c.mechanical_dimension());
    for (double t : {0.1, 0.5, 2.0}) {
      const TwoQubitChannel ch = evolve_channel(c, rho, t);
      CHECK(ch.min_eigenvalue() > -1e-10);
      CHECK(ch.trace_preservation_error() < 1e-12);
    }
  }
}

TEST_CASE("lattice validation") {
  LatticeConfig c = fig7(2);
  c.dimension_cap = 80;
  CHECK_THROWS_AS(c.validate(), SizeError);
  MatrixXc bad = MatrixXc::Identity(9, 9);
  CHECK_THROWS_AS(MechanicalState{bad}, ValidationError);
  CHECK_THROWS_AS(evolve_channel(fig7(1), MechanicalState::maximally_mixed(3), 1.0), ValidationError);
}
