#include "hotgate/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "hotgate/errors.hpp"

namespace hotgate {

namespace {

// Orthonormal Hermite polynomials p_k(x) (weight e^{-x^2}) and p_n'(x).
void hermite_orthonormal(int n, double x, double& pn, double& dpn, double& sum_sq) {
  double p_prev = 0.0;
  double p = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
  sum_sq = p * p;
  for (int k = 0; k + 1 < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * x * p - std::sqrt(double(k) / (k + 1)) * p_prev;
    p_prev = p;
    p = next;
    sum_sq += p * p;
  }
  // p_{n-1} is in p; build p_n for the Newton step
  const double p_n = std::sqrt(2.0 / n) * x * p - std::sqrt(double(n - 1) / n) * p_prev;
  pn = p_n;
  dpn = std::sqrt(2.0 * n) * p;
}

}  // namespace

QuadratureRule gauss_hermite(int n) {
  if (n < 1 || n > 200) throw ValidationError("Gauss-Hermite order must be in [1, 200]");
  // Golub-Welsch for the nodes, then Newton polish and Christoffel weights 1 / sum p_k^2
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) jac(k, k - 1) = jac(k - 1, k) = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac, Eigen::EigenvaluesOnly);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = es.eigenvalues()(i);
    double pn = 0, dpn = 0, s = 0;
    for (int it = 0; it < 4; ++it) {
      hermite_orthonormal(n, x, pn, dpn, s);
      if (dpn == 0.0) break;
      x -= pn / dpn;
    }
    hermite_orthonormal(n, x, pn, dpn, s);
    rule.nodes[i] = x;
    rule.weights[i] = 1.0 / s;
  }
  // exact symmetry
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[n - 1 - i]);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule gauss_hermite_normal(int n) {
  QuadratureRule rule = gauss_hermite(n);
  double total = 0.0;
  for (double w : rule.weights) total += w;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    rule.nodes[i] *= std::numbers::sqrt2;
    rule.weights[i] /= total;
  }
  return rule;
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw ValidationError("Gauss-Legendre order must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pm = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    if (n == 1) {
      x = 0.0;
      dp = 1.0;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule composite_gauss_legendre(double lo, double hi, int panels, int nodes_per_panel) {
  if (panels < 1) throw ValidationError("panel count must be >= 1");
  if (!(hi > lo)) throw ValidationError("empty integration interval");
  const QuadratureRule base = gauss_legendre(nodes_per_panel);
  const double h = (hi - lo) / panels;
  QuadratureRule rule;
  rule.nodes.reserve(std::size_t(panels) * base.size());
  rule.weights.reserve(rule.nodes.capacity());
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h;
    for (std::size_t k = 0; k < base.size(); ++k) {
      rule.nodes.push_back(mid + 0.5 * h * base.nodes[k]);
      rule.weights.push_back(0.5 * h * base.weights[k]);
    }
  }
  return rule;
}

QuadratureRule normal_expectation_rule(int panels, int nodes_per_panel, double half_width) {
  QuadratureRule rule = composite_gauss_legendre(-half_width, half_width, panels, nodes_per_panel);
  double total = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double z = rule.nodes[i];
    rule.weights[i] *= std::exp(-0.5 * z * z);
    total += rule.weights[i];
  }
  for (double& w : rule.weights) w /= total;
  return rule;
}

std::vector<double> hermite_functions(int nmax, double t) {
  std::vector<double> h(std::size_t(nmax) + 1);
  h[0] = std::exp(-0.5 * t * t) / std::sqrt(std::sqrt(std::numbers::pi));
  if (nmax >= 1) h[1] = std::numbers::sqrt2 * t * h[0];
  for (int n = 1; n < nmax; ++n)
    h[n + 1] = std::sqrt(2.0 / (n + 1)) * t * h[n] - std::sqrt(double(n) / (n + 1)) * h[n - 1];
  return h;
}

std::vector<double> hermite_polynomials(int nmax, double t) {
  std::vector<double> p(std::size_t(nmax) + 1);
  p[0] = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
  if (nmax >= 1) p[1] = std::numbers::sqrt2 * t * p[0];
  for (int n = 1; n < nmax; ++n)
    p[n + 1] = std::sqrt(2.0 / (n + 1)) * t * p[n] - std::sqrt(double(n) / (n + 1)) * p[n - 1];
  return p;
}

double oscillator_wavefunction(int n, double nu, double x) {
  if (n < 0 || !(nu > 0)) throw ValidationError("oscillator level must be >= 0 and nu > 0");
  return std::pow(nu, 0.25) * hermite_functions(n, std::sqrt(nu) * x)[std::size_t(n)];
}

}  // namespace hotgate
