#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "../oracles.hpp"
#include "doctest.h"
#include "hotgate/channel_fidelity.hpp"
#include "hotgate/errors.hpp"

using namespace hotgate;

namespace {

constexpr double kPi4 = std::numbers::pi / 4.0;

CouplingDistribution single(double mu) { return {{{mu, 1.0}}, true}; }

CouplingDistribution two_point(double m1, double m2, double p) { return {{{m1, p}, {m2, 1 - p}}, true}; }

}  // namespace

TEST_CASE("damping fidelity limits") {
  const auto d = two_point(0.3, 1.7, 0.4);
  CHECK(zz_damping_fidelity(d, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(zz_damping_fidelity(single(0.8), kPi4 / 0.8) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(GateTime(-1.0), ValidationError);
  const CouplingDistribution unnormalized{{{1.0, 0.5}}, true};
  CHECK_THROWS_AS(zz_damping_fidelity(unnormalized, 1.0), ValidationError);
}

TEST_CASE("Gaussian phase closed form") {
  // theta = mu dt ~ N(pi/4, 0.1^2) gives 1/2 + 1/2 exp(-2 * 0.01)
  CouplingDistribution d;
  const int n = 4000;
  const double h = 16.0 / n;
  double total = 0;
  for (int k = 0; k <= n; ++k) {
    const double z = -8.0 + k * h;
    const double w = std::exp(-0.5 * z * z) * (k == 0 || k == n ? 0.5 : 1.0);
    d.nodes.push_back({kPi4 + 0.1 * z, w});
    total += w;
  }
  for (auto& nd : d.nodes) nd.weight /= total;
  CHECK(zz_damping_fidelity(d, 1.0) == doctest::Approx(0.5 + 0.5 * std::exp(-0.02)).epsilon(1e-13));
  CHECK(0.5 + 0.5 * std::exp(-0.02) == doctest::Approx(0.990099).epsilon(1e-6));
}

TEST_CASE("serial and parallel damping sums are bitwise equal") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0, 1);
  CouplingDistribution d;
  for (int k = 0; k < 20000; ++k) d.nodes.push_back({u(gen), 1.0 / 20000});
  for (double dt : {0.1, 1.0, 7.0}) CHECK(zz_damping_fidelity(d, dt, Exec::serial) == zz_damping_fidelity(d, dt, Exec::parallel));
}

TEST_CASE("Choi fidelity") {
  CHECK(choi_fidelity(TwoQubitChannel::zz_rotation(0.0), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(choi_fidelity(TwoQubitChannel::zz_rotation(kPi4), kPi4) == doctest::Approx(1.0).epsilon(1e-15));
  const std::vector<double> angles{0.0, 2 * kPi4}, weights{0.5, 0.5};
  CHECK(choi_fidelity(TwoQubitChannel::zz_mixture(angles, weights), kPi4) == doctest::Approx(0.5).epsilon(1e-15));

  // against the oracle's brute-force Choi construction from Kraus operators
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 10; ++trial) {
    const double t1 = u(gen), t2 = u(gen), p = 0.5 + 0.25 * u(gen) / 2;
    std::vector<oracle::Mat> kraus;
    std::vector<Matrix4c> lib;
    for (auto [t, w] : {std::pair{t1, p}, std::pair{t2, 1 - p}}) {
      const Matrix4c k = std::sqrt(w) * zz_unitary(t);
      lib.push_back(k);
      kraus.push_back(k);
    }
    const auto channel = TwoQubitChannel::from_kraus(lib);
    const double expect = oracle::gate_fidelity(oracle::choi_of(kraus));
    CHECK(choi_fidelity(channel, kPi4) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(expect == doctest::Approx(oracle::cos2_fidelity({t1, t2}, {p, 1 - p})).epsilon(1e-14));
    CHECK(channel.trace_preservation_error() < 1e-14);
    CHECK(channel.min_eigenvalue() > -1e-14);
  }
}

TEST_CASE("channel validation") {
  Matrix16c bad = TwoQubitChannel::zz_rotation(0.2).choi();
  bad(0, 0) += 0.5;
  CHECK_THROWS_AS(TwoQubitChannel::from_choi(bad), ValidationError);
  Matrix16c neg = Matrix16c::Zero();
  neg(0, 0) = -1;
  neg(5, 5) = 5;
  CHECK_THROWS_AS(TwoQubitChannel::from_choi(neg), ValidationError);
  const Matrix4c rho = Matrix4c::Identity() / 4.0;
  CHECK((TwoQubitChannel::zz_rotation(0.7).apply(rho) - rho).norm() < 1e-15);
}

TEST_CASE("mediated fidelity") {
  const double t = 1.3;
  const auto d1 = two_point(0.2, 0.9, 0.3);
  CHECK(mediated_fidelity(d1, single(kPi4 / t), t) == doctest::Approx(zz_damping_fidelity(d1, t)).epsilon(1e-15));
  CHECK(mediated_fidelity(single(kPi4), single(kPi4), 1.0) == doctest::Approx(1.0).epsilon(1e-15));

  // explicit three-qubit measurement-and-correction sequence
  const auto d2 = two_point(-0.4, 1.1, 0.65);
  oracle::Mat choi = oracle::Mat::Zero(16, 16);
  for (const auto& n1 : d1.nodes)
    for (const auto& n2 : d2.nodes) choi += n1.weight * n2.weight * oracle::choi_of(oracle::mediated_kraus(n1.mu_bar * t, n2.mu_bar * t));
  CHECK(mediated_fidelity(d1, d2, t) == doctest::Approx(oracle::gate_fidelity(choi)).epsilon(1e-13));
}

TEST_CASE("echo residual") {
  Eigen::MatrixXd hzz = Eigen::MatrixXd::Zero(3, 3);
  hzz(0, 1) = 0.4;
  hzz(1, 2) = -1.1;
  hzz(0, 2) = 0.25;
  CHECK(echo_residual({{0, 0, 0}, 1.0}, hzz, 3) < 1e-14);
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-2, 2);
  Eigen::MatrixXd h2 = Eigen::MatrixXd::Zero(2, 2);
  h2(0, 1) = u(gen);
  CHECK(echo_residual({{u(gen), u(gen)}, 1.0}, h2, 2) < 1e-10);
  Eigen::MatrixXd h4 = Eigen::MatrixXd::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) h4(i, j) = u(gen);
  CHECK(echo_residual({{0.7, 0.7, 0.7, 0.7}, std::numbers::pi}, h4, 4) < 1e-10);
  Eigen::MatrixXd h7 = Eigen::MatrixXd::Zero(7, 7);
  CHECK_THROWS_AS(echo_residual({std::vector<double>(7, 0.0), 1.0}, h7, 7), SizeError);
  CHECK_THROWS_AS(echo_residual({{0, 0}, -1.0}, h2, 2), ValidationError);
}

TEST_CASE("fractional flip schedule") {
  const double tau = 2.0;
  const auto s = fractional_flip_schedule(LogicalVector{1.0, 0.0, -0.5}, tau);
  REQUIRE(s.size() == 6);
  CHECK(s[0].qubit == 2);
  CHECK(s[0].time == doctest::Approx(0.5));
  CHECK(s[1].qubit == 1);
  CHECK(s[1].time == doctest::Approx(1.0));
  for (int k = 2; k < 6; ++k) CHECK(s[k].time == tau);

  // v = (0.5, 1): the ZZ phase is half the unflipped phase
  Eigen::MatrixXd hzz = Eigen::MatrixXd::Zero(2, 2);
  hzz(0, 1) = 0.9;
  const std::vector<double> fields{0.0, 0.0};
  const auto sched = fractional_flip_schedule(LogicalVector{0.5, 1.0}, tau);
  const MatrixXc u = schedule_propagator(sched, hzz, fields, tau);
  MatrixXc expect = MatrixXc::Zero(4, 4);
  for (int s2 = 0; s2 < 4; ++s2) {
    const double zz = ((s2 & 1) == ((s2 >> 1) & 1)) ? 1.0 : -1.0;
    expect(s2, s2) = std::polar(1.0, -0.5 * 0.9 * tau * zz);
  }
  CHECK((u - expect).norm() < 1e-14);

  // v = 0 on one qubit decouples it entirely
  const auto off = fractional_flip_schedule(LogicalVector{0.0, 1.0}, tau);
  CHECK((schedule_propagator(off, hzz, fields, tau) - MatrixXc::Identity(4, 4)).norm() < 1e-14);
}
