#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "hotgate/errors.hpp"
#include "hotgate/paul_trap.hpp"

using namespace hotgate;

namespace {

// |psi_n(x)|^2 for unit mass and frequency nu, from the plain Hermite recurrence
double oscillator_density(int n, double nu, double x) {
  const double t = std::sqrt(nu) * x;
  double h0 = 1.0, h1 = 2.0 * t;
  double h = n == 0 ? h0 : h1;
  for (int k = 1; k < n; ++k) {
    h = 2.0 * t * h1 - 2.0 * k * h0;
    h0 = h1;
    h1 = h;
  }
  const double norm = std::sqrt(nu / std::numbers::pi) / (std::pow(2.0, n) * std::tgamma(n + 1.0));
  return norm * h * h * std::exp(-t * t);
}

// E[J ((d0 - u_a + u_b)^2 + dy^2)^(-gamma/2)] on a fine tensor trapezoid grid
double pair_oracle(double d0, double dy, double J, int gamma, double nu_a, int n_a, double nu_b, int n_b) {
  const int m = 1200;
  const double wa = 8.0 / std::sqrt(nu_a), wb = 8.0 / std::sqrt(nu_b);
  const double ha = 2 * wa / m, hb = 2 * wb / m;
  double s = 0;
  for (int i = 0; i <= m; ++i) {
    const double ua = -wa + i * ha;
    const double pa = oscillator_density(n_a, nu_a, ua) * ha;
    for (int j = 0; j <= m; ++j) {
      const double ub = -wb + j * hb;
      const double sep = d0 - ua + ub;
      s += pa * oscillator_density(n_b, nu_b, ub) * hb * J * std::pow(sep * sep + dy * dy, -gamma / 2.0);
    }
  }
  return s;
}

}  // namespace

TEST_CASE("equilibrium closed forms") {
  CHECK(equilibrium_positions(1) == std::vector<double>{0.0});
  const auto x2 = equilibrium_positions(2);
  CHECK(x2[1] == doctest::Approx(std::pow(2.0, -2.0 / 3.0)).epsilon(1e-12));
  CHECK(x2[0] == doctest::Approx(-std::pow(2.0, -2.0 / 3.0)).epsilon(1e-12));
  const auto x3 = equilibrium_positions(3);
  CHECK(x3[0] == doctest::Approx(-std::cbrt(1.25)).epsilon(1e-12));
  CHECK(std::abs(x3[1]) < 1e-12);
  CHECK(x3[2] == doctest::Approx(std::cbrt(1.25)).epsilon(1e-12));
}

TEST_CASE("equilibria are symmetric force-free minima") {
  for (std::size_t K = 2; K <= kMaxChainIons; ++K) {
    const auto x = equilibrium_positions(K);
    for (std::size_t i = 0; i < K; ++i) {
      CHECK(x[i] == doctest::Approx(-x[K - 1 - i]).scale(1.0).epsilon(1e-12));
      double f = x[i];
      for (std::size_t j = 0; j < K; ++j)
        if (j != i) f -= (x[i] > x[j] ? 1.0 : -1.0) / ((x[i] - x[j]) * (x[i] - x[j]));
      CHECK(std::abs(f) < 1e-12);
    }
  }
}

TEST_CASE("normal modes") {
  const ModeDecomposition m3 = mode_decomposition({3, 2.0, 1.5});
  CHECK(m3.lambdas[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m3.lambdas[1] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(m3.lambdas[2] == doctest::Approx(29.0 / 5.0).epsilon(1e-12));
  CHECK(m3.frequencies[2] == doctest::Approx(2.0 * std::sqrt(5.8)).epsilon(1e-12));
  CHECK(m3.equilibrium[2] == doctest::Approx(1.5 * std::cbrt(1.25)).epsilon(1e-12));
  const double expect[3][3] = {{1 / std::sqrt(3.0), 1 / std::sqrt(3.0), 1 / std::sqrt(3.0)},
                               {1 / std::sqrt(2.0), 0, -1 / std::sqrt(2.0)},
                               {1 / std::sqrt(6.0), -2 / std::sqrt(6.0), 1 / std::sqrt(6.0)}};
  for (int m = 0; m < 3; ++m) {
    const double sign = m3.mode_vectors(0, m) > 0 ? 1.0 : -1.0;
    for (int i = 0; i < 3; ++i) CHECK(sign * m3.mode_vectors(i, m) == doctest::Approx(expect[m][i]).scale(1.0).epsilon(1e-12));
  }
  for (std::size_t K = 1; K <= 8; ++K) {
    const ModeDecomposition md = mode_decomposition({K, 1.0, 1.0});
    CHECK(md.lambdas[0] == doctest::Approx(1.0).epsilon(1e-10));
    for (std::size_t i = 0; i < K; ++i) CHECK(md.mode_vectors(Eigen::Index(i), 0) == doctest::Approx(1 / std::sqrt(double(K))).epsilon(1e-10));
    CHECK(md.reconstruction_error < 1e-10);
  }
}

TEST_CASE("trap validation") {
  CHECK_THROWS_AS(TrapSpec({0, 1, 1}).validate(), ValidationError);
  CHECK_THROWS_AS(TrapSpec({kMaxChainIons + 1, 1, 1}).validate(), ValidationError);
  CHECK_THROWS_AS(TrapSpec({2, -1, 1}).validate(), ValidationError);
}

TEST_CASE("thermal truncation") {
  const std::vector<double> single{1.0};
  const auto t = thermal_truncation(single, 1.0, 0.05);
  REQUIRE(t.states.size() == 3);
  for (int n = 0; n < 3; ++n) CHECK(t.states[std::size_t(n)].occupation[0] == n);
  const double q = std::exp(-1.0);
  CHECK(t.retained_mass == doctest::Approx((1 - q) * (1 + q + q * q)).epsilon(1e-13));
  double total = 0;
  for (const auto& s : t.states) total += s.probability;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));

  const ModeDecomposition md = mode_decomposition({6, 1.0, 4.78});
  const auto cold = thermal_truncation(md, 1e-6 * md.frequencies[0], 0.5);
  REQUIRE(cold.states.size() == 1);
  CHECK(cold.states[0].probability == 1.0);
  const auto warm = thermal_truncation(md, 1.3, 0.07);
  CHECK(warm.retained_mass >= 0.93);
  for (std::size_t k = 1; k < warm.states.size(); ++k) CHECK(warm.states[k].energy >= warm.states[k - 1].energy);
  CHECK_THROWS_AS(thermal_truncation(md, 1.3, 0.001, 10), SizeError);
}

TEST_CASE("single-ion pair expectation against direct quadrature") {
  const CouplingLaw law(1.0, 3);
  const std::vector<double> freq{1.0, 0.7};
  for (auto [na, nb] : {std::pair{0, 0}, std::pair{1, 2}, std::pair{3, 0}}) {
    const std::vector<int> occ{na, nb};
    const PairGeometry g{0.3, 6.0, {-1.0, 1.0}};
    const auto e = pair_expectation(g, law, freq, occ, 0.0);
    CHECK(e.discarded_mass == 0.0);
    CHECK(e.value == doctest::Approx(pair_oracle(0.3, 6.0, 1.0, 3, 1.0, na, 0.7, nb)).epsilon(1e-9));
  }
}

TEST_CASE("twin single ions share one pair geometry") {
  const TrapSystem sys = build_trap_system(TrapPairConfig::twin_traps(1, 1.0, 0.7, 1.0, 12.0, CouplingLaw(1, 3)));
  REQUIRE(sys.cross.size() == 1);
  CHECK(sys.cross[0].d0 == 0.0);
  CHECK(sys.cross[0].transverse == 12.0);
  CHECK(sys.cross[0].c == std::vector<double>{-1.0, 1.0});
  CHECK(sys.frequencies == std::vector<double>{1.0, 0.7});
}

TEST_CASE("stiff traps reproduce the frozen geometry") {
  const CouplingLaw law(1.0, 3);
  const double L = 3.0, dy = 2.0;
  TrapPairConfig cfg = TrapPairConfig::twin_traps(2, 1e8, 1e8, L, dy, law);
  const TrapSystem sys = build_trap_system(cfg);
  const double x = L * std::pow(2.0, -2.0 / 3.0);
  const double frozen = 2 * law.J * std::pow(dy * dy, -1.5) + 2 * law.J * std::pow(4 * x * x + dy * dy, -1.5);
  const std::vector<int> ground(4, 0);
  CHECK(diagonal_mode_coupling(sys, ground) == doctest::Approx(frozen).epsilon(1e-6));

  cfg.a = LogicalVector::zeros(2);
  CHECK(diagonal_mode_coupling(build_trap_system(cfg), ground) == 0.0);
}

TEST_CASE("nondegenerate fidelity limits") {
  const TrapPairConfig cfg = TrapPairConfig::cold_mediator(2, 1.0, 0.01, 15.97, 20.0, CouplingLaw(1, 3));
  CHECK(nondegenerate_fidelity(cfg, 0.1, 0.05, 0.0) == doctest::Approx(0.5).epsilon(1e-14));

  const TrapSystem sys = build_trap_system(cfg);
  const double mu0 = diagonal_mode_coupling(sys, std::vector<int>(3, 0));
  const double t = 300.0;
  const double cold = nondegenerate_fidelity(cfg, 1e-9, 0.05, t);
  const double c = std::cos(std::numbers::pi / 4 - mu0 * t);
  CHECK(cold == doctest::Approx(c * c).epsilon(1e-9));
}

TEST_CASE("Paul tables are exec independent") {
  const TrapSystem sys = build_trap_system(TrapPairConfig::single_trap(4, 1.0, 4.78, CouplingLaw(1, 3)));
  PaulTableOptions opt;
  opt.temperature = 1.3;
  opt.epsilon = 0.07;
  opt.max_discarded_mass = 1e-6;
  const PaulTable serial = build_paul_table(sys, opt);
  opt.exec = Exec::parallel;
  const PaulTable parallel = build_paul_table(sys, opt);
  CHECK(serial.cross.values == parallel.cross.values);
  CHECK(serial.cross.weights == parallel.cross.weights);
  CHECK(serial.max_discarded_mass < 1e-6);
  const std::vector<double> ones{1, 1};
  CHECK(scale_separation(serial, ones, ones) > 10.0);
}

TEST_CASE("Fock blocks are Hermitian and thermal state normalized") {
  const TrapSystem sys = build_trap_system(TrapPairConfig::twin_traps(1, 1.0, 0.7, 1.0, 12.0, CouplingLaw(1, 3)));
  const auto blocks = twin_trap_fock_blocks(sys, 4, 40);
  for (const auto& b : blocks) CHECK((b - b.transpose()).norm() < 1e-12);
  CHECK(((blocks[0] + blocks[1]) / 2.0).diagonal()(0) == doctest::Approx(0.5 * (1.0 + 0.7)).epsilon(1e-12));
  const auto th = thermal_truncation(std::vector<double>{1.0, 0.7}, 0.5, 1e-4);
  const MatrixXc rho = fock_thermal_state(th, 8);
  CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
}
