#include <cmath>
#include <random>
#include <vector>

#include "../oracles.hpp"
#include "doctest.h"
#include "hotgate/channel_fidelity.hpp"
#include "hotgate/classical_noise.hpp"
#include "hotgate/errors.hpp"

using namespace hotgate;

namespace {

struct Moments {
  double mean = 0, second = 0;
};

Moments moments(const CouplingDistribution& d) {
  Moments m;
  for (const auto& n : d.nodes) {
    m.mean += n.weight * n.mu_bar;
    m.second += n.weight * n.mu_bar * n.mu_bar;
  }
  return m;
}

// mean and standard error of f over samples
std::pair<double, double> sample_stats(const std::vector<double>& v) {
  double s = 0, s2 = 0;
  for (double x : v) {
    s += x;
    s2 += x * x;
  }
  const double n = double(v.size()), mean = s / n;
  return {mean, std::sqrt((s2 / n - mean * mean) / (n - 1))};
}

constexpr std::size_t kSamples = 1'000'000;

}  // namespace

TEST_CASE("cold mediator degenerate limits") {
  const CouplingLaw law(1, 1);
  const auto frozen = ColdMediatorModel::chain_1d(4, 1, 1, 0.0);
  const auto d = distribution_cold_mediator(frozen, LogicalVector::ones(4), 1.0, law);
  REQUIRE(d.nodes.size() == 1);
  double expect = 0;
  for (int i = 0; i < 4; ++i) expect += oracle::coupling(1, 1, i - 1.5, 1);
  CHECK(d.nodes[0].mu_bar == doctest::Approx(expect).epsilon(1e-14));
  CHECK(d.nodes[0].weight == doctest::Approx(1.0).epsilon(1e-15));

  const auto noisy = ColdMediatorModel::chain_1d(4, 1, 1, 3.0);
  for (const auto& n : distribution_cold_mediator(noisy, LogicalVector::zeros(4), 1.0, law).nodes)
    CHECK(n.mu_bar == 0.0);
}

TEST_CASE("cold mediator mean matches an independent Monte Carlo") {
  const CouplingLaw law(1, 1);
  const auto model = ColdMediatorModel::chain_1d(4, 1, 1, 3.0);
  const auto d = distribution_cold_mediator(model, LogicalVector::ones(4), 1.0, law);
  CHECK(d.total_weight() == doctest::Approx(1.0).epsilon(1e-13));
  std::mt19937_64 gen(11);
  std::normal_distribution<double> z(1.5, 3.0);
  std::vector<double> mu(kSamples);
  for (auto& m : mu) {
    const double qx = z(gen);
    m = 0;
    for (int i = 0; i < 4; ++i) m += oracle::coupling(1, 1, i - qx, 1);
  }
  const auto [mean, se] = sample_stats(mu);
  CHECK(std::abs(d.mean() - mean) < 3 * se);
}

TEST_CASE("collective noise moments match an independent Monte Carlo") {
  const CouplingLaw law(1, 1);
  const auto model = CollectiveGaussianModel::chains_1d(5, 5, 1, 1, 3.0);
  const auto d = distribution_collective(model, LogicalVector::ones(5), LogicalVector::ones(5), law);
  const Moments m = moments(d);
  std::mt19937_64 gen(12);
  std::normal_distribution<double> z(0.0, 3.0);
  std::vector<double> mu(kSamples), mu2(kSamples);
  for (std::size_t s = 0; s < kSamples; ++s) {
    const double shift = z(gen) - z(gen);
    double v = 0;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) v += oracle::coupling(1, 1, i - j + shift, 1);
    mu[s] = v;
    mu2[s] = v * v;
  }
  const auto [m1, se1] = sample_stats(mu);
  const auto [m2, se2] = sample_stats(mu2);
  CHECK(std::abs(m.mean - m1) < 3 * se1);
  CHECK(std::abs(m.second - m2) < 3 * se2);
}

TEST_CASE("collective degenerate limits") {
  const CouplingLaw law(1, 1);
  const auto frozen = CollectiveGaussianModel::chains_1d(2, 3, 1, 1, 0.0);
  const auto d = distribution_collective(frozen, LogicalVector::ones(2), LogicalVector::ones(3), law);
  REQUIRE(d.nodes.size() == 1);
  double expect = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) expect += oracle::coupling(1, 1, i - j, 1);
  CHECK(d.nodes[0].mu_bar == doctest::Approx(expect).epsilon(1e-14));
  const auto noisy = CollectiveGaussianModel::chains_1d(2, 3, 1, 1, 3.0);
  for (const auto& n : distribution_collective(noisy, LogicalVector::zeros(2), LogicalVector::zeros(3), law).nodes)
    CHECK(n.mu_bar == 0.0);
}

TEST_CASE("independent discrete model") {
  const CouplingLaw law(1, 1);
  SUBCASE("single displacement") {
    auto model = IndependentDiscreteModel::chains_1d(2, 2, 2, 4, 1, 0.5);
    model.displacements = {{SpatialVector{0.0, 0.0}, 1.0}};
    const auto d = distribution_independent(model, LogicalVector::ones(2), LogicalVector::ones(2), law);
    REQUIRE(d.nodes.size() == 1);
    double expect = 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) expect += oracle::coupling(1, 1, 2.0 * (i - j), 4);
    CHECK(d.nodes[0].mu_bar == doctest::Approx(expect).epsilon(1e-14));
  }
  SUBCASE("one qubit each gives the outer product of marginals") {
    const auto model = IndependentDiscreteModel::chains_1d(1, 1, 2, 4, 1, 0.5);
    const auto d = distribution_independent(model, LogicalVector::ones(1), LogicalVector::ones(1), law);
    REQUIRE(d.nodes.size() == 9);
    CHECK(d.exact);
    const double p[3] = {0.25, 0.5, 0.25};
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) CHECK(d.nodes[k * 3 + l].weight == doctest::Approx(p[k] * p[l]).epsilon(1e-15));
  }
  SUBCASE("brute force over all 81 configurations") {
    const auto model = IndependentDiscreteModel::chains_1d(2, 2, 2, 4, 1, 0.5);
    const LogicalVector a{1, 1}, b{1, 1};
    const auto d = distribution_independent(model, a, b, law);
    CHECK(d.nodes.size() == 81);
    const double off[3] = {-1, 0, 1}, p[3] = {0.25, 0.5, 0.25};
    double mean = 0, fid = 0;
    const double dt = 0.7;
    for (int c = 0; c < 81; ++c) {
      int k[4], r = c;
      for (int& x : k) {
        x = r % 3;
        r /= 3;
      }
      double mu = 0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) mu += oracle::coupling(1, 1, 2.0 * (i - j), 4 + off[k[i]] - off[k[2 + j]]);
      const double w = p[k[0]] * p[k[1]] * p[k[2]] * p[k[3]];
      mean += w * mu;
      fid += w * std::pow(std::cos(std::numbers::pi / 4 - mu * dt), 2);
    }
    CHECK(d.mean() == doctest::Approx(mean).epsilon(1e-14));
    CHECK(zz_damping_fidelity(d, dt) == doctest::Approx(fid).epsilon(1e-13));
    const auto table = table_independent(model, law);
    const std::vector<double> ones{1, 1};
    CHECK(table.fidelity(ones, ones, dt) == doctest::Approx(fid).epsilon(1e-13));
  }
  SUBCASE("enumeration cap") {
    auto model = IndependentDiscreteModel::chains_1d(3, 3, 2, 4, 1, 0.5);
    model.enumeration_cap = 100;
    CHECK_THROWS_AS(distribution_independent(model, LogicalVector::ones(3), LogicalVector::ones(3), law), SizeError);
  }
}

TEST_CASE("samplers") {
  const CouplingLaw law(1, 1);
  const auto cold = ColdMediatorModel::chain_1d(3, 1, 1, 3.0);
  const LogicalVector a = LogicalVector::ones(3);
  CHECK(sample_coupling(cold, a, 1.0, law, 7, 1) == sample_coupling(cold, a, 1.0, law, 7, 1));
  CHECK(sample_coupling(cold, a, 1.0, law, 7, 5000, Exec::serial) ==
        sample_coupling(cold, a, 1.0, law, 7, 5000, Exec::parallel));

  const auto frozen = CollectiveGaussianModel::chains_1d(2, 2, 1, 1, 0.0);
  const auto s = sample_coupling(frozen, LogicalVector::ones(2), LogicalVector::ones(2), law, 3, 100);
  for (double v : s) CHECK(v == s.front());

  // empirical mean of the library sampler against the quadrature mean
  const auto model = CollectiveGaussianModel::chains_1d(3, 3, 1, 1, 3.0);
  const LogicalVector ones = LogicalVector::ones(3);
  const auto mu = sample_coupling(model, ones, ones, law, 5, kSamples, Exec::parallel);
  const auto [mean, se] = sample_stats(mu);
  CHECK(std::abs(distribution_collective(model, ones, ones, law).mean() - mean) < 3 * se);
}

TEST_CASE("tables agree with direct distributions and are exec invariant") {
  const CouplingLaw law(1, 1);
  const auto model = CollectiveGaussianModel::chains_1d(3, 2, 1, 1, 2.0);
  const std::vector<double> a{0.5, -1, 0.8}, b{1, 0.3};
  const auto serial = table_collective(model, law, 0, Exec::serial, 5.0);
  const auto parallel = table_collective(model, law, 0, Exec::parallel, 5.0);
  CHECK(serial.values == parallel.values);
  CHECK(serial.weights == parallel.weights);
  for (double dt : {0.01, 0.3, 2.0, 5.0}) {
    CHECK(serial.fidelity(a, b, dt, Exec::serial) == parallel.fidelity(a, b, dt, Exec::parallel));
    const auto d = serial.distribution(a, b);
    CHECK(serial.fidelity(a, b, dt) == doctest::Approx(zz_damping_fidelity(d, dt)).epsilon(1e-14));
  }
  const auto cold = ColdMediatorModel::chain_1d(4, 1, 1, 3.0);
  const auto ct = table_cold_mediator(cold, law);
  const std::vector<double> ca{1, 1, 1, 1}, cb{1};
  const auto direct = distribution_cold_mediator(cold, LogicalVector::ones(4), 1.0, law);
  CHECK(ct.distribution(ca, cb).mean() == doctest::Approx(direct.mean()).epsilon(1e-13));
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(ColdMediatorModel::chain_1d(3, 1, 1, -1.0).validate(), ValidationError);
  CHECK_THROWS_AS(IndependentDiscreteModel::chains_1d(1, 1, 2, 4, 1, 1.5).validate(), ValidationError);
}
