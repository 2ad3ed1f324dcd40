#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hotgate/quadrature.hpp"

using namespace hotgate;

namespace {

double gaussian_moment(int k) {
  // integral of x^k e^{-x^2}: Gamma((k+1)/2) for even k
  return k % 2 ? 0.0 : std::tgamma((k + 1) / 2.0);
}

}  // namespace

TEST_CASE("Gauss-Hermite weights sum to sqrt(pi)") {
  for (int n : {1, 2, 5, 24, 80, 200}) {
    const QuadratureRule r = gauss_hermite(n);
    double s = 0;
    for (double w : r.weights) s += w;
    CHECK(s == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
  }
}

TEST_CASE("Gauss-Hermite integrates polynomials of degree 2n-1 exactly") {
  for (int n : {3, 8, 16}) {
    const QuadratureRule r = gauss_hermite(n);
    for (int k = 0; k < 2 * n; ++k) {
      double s = 0, magnitude = 0;
      for (std::size_t i = 0; i < r.size(); ++i) {
        s += r.weights[i] * std::pow(r.nodes[i], k);
        magnitude += r.weights[i] * std::pow(std::abs(r.nodes[i]), k);
      }
      CHECK(std::abs(s - gaussian_moment(k)) <= 1e-13 * magnitude);
    }
  }
}

TEST_CASE("two-point Gauss-Hermite closed form") {
  const QuadratureRule r = gauss_hermite(2);
  CHECK(r.nodes[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(r.weights[0] == doctest::Approx(std::sqrt(std::numbers::pi) / 2.0).epsilon(1e-15));
}

TEST_CASE("normal expectation rules") {
  const QuadratureRule gh = gauss_hermite_normal(30);
  const QuadratureRule gl = normal_expectation_rule(200);
  for (const QuadratureRule* r : {&gh, &gl}) {
    double m0 = 0, m2 = 0, m4 = 0, c = 0;
    for (std::size_t i = 0; i < r->size(); ++i) {
      const double z = r->nodes[i], w = r->weights[i];
      m0 += w;
      m2 += w * z * z;
      m4 += w * z * z * z * z;
      c += w * std::cos(1.3 * z);
    }
    CHECK(m0 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m4 == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(c == doctest::Approx(std::exp(-0.5 * 1.3 * 1.3)).epsilon(1e-12));
  }
}

TEST_CASE("Gauss-Legendre exactness") {
  const QuadratureRule r = gauss_legendre(7);
  for (int k = 0; k < 14; ++k) {
    double s = 0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
    CHECK(s == doctest::Approx(k % 2 ? 0.0 : 2.0 / (k + 1)).scale(1.0).epsilon(1e-14));
  }
  const QuadratureRule c = composite_gauss_legendre(0.0, std::numbers::pi, 10, 8);
  double s = 0;
  for (std::size_t i = 0; i < c.size(); ++i) s += c.weights[i] * std::sin(c.nodes[i]);
  CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("Hermite functions are orthonormal") {
  const QuadratureRule r = gauss_hermite(60);
  const int nmax = 12;
  for (int m = 0; m <= nmax; ++m)
    for (int n = 0; n <= nmax; ++n) {
      double s = 0;
      for (std::size_t i = 0; i < r.size(); ++i) {
        const auto p = hermite_polynomials(nmax, r.nodes[i]);
        s += r.weights[i] * p[m] * p[n];
      }
      CHECK(s == doctest::Approx(m == n ? 1.0 : 0.0).scale(1.0).epsilon(1e-12));
    }
  const auto h = hermite_functions(3, 0.7);
  const auto p = hermite_polynomials(3, 0.7);
  for (int n = 0; n <= 3; ++n) CHECK(h[n] == doctest::Approx(p[n] * std::exp(-0.245)).epsilon(1e-15));
}

TEST_CASE("oscillator wavefunction") {
  const double nu = 2.5, x = 0.4;
  CHECK(oscillator_wavefunction(0, nu, x) ==
        doctest::Approx(std::pow(nu / std::numbers::pi, 0.25) * std::exp(-nu * x * x / 2)).epsilon(1e-14));
  CHECK(oscillator_wavefunction(1, nu, x) ==
        doctest::Approx(std::sqrt(2 * nu) * x * oscillator_wavefunction(0, nu, x)).epsilon(1e-14));
}
