#pragma once

#include <vector>

namespace hotgate {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Gauss-Hermite rule for the weight e^{-x^2}. 1 <= n <= 200.
QuadratureRule gauss_hermite(int n);

/// Gauss-Hermite rule rescaled to E[f(Z)] for Z ~ N(0, 1); weights sum to 1.
QuadratureRule gauss_hermite_normal(int n);

/// Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

/// Composite Gauss-Legendre on [lo, hi] with equal panels.
QuadratureRule composite_gauss_legendre(double lo, double hi, int panels, int nodes_per_panel);

/// E[f(Z)] for Z ~ N(0, 1) by composite Gauss-Legendre on [-half_width, half_width].
/// The density is folded into the weights, which are renormalized to sum to 1.
QuadratureRule normal_expectation_rule(int panels, int nodes_per_panel = 8,
                                       double half_width = 9.0);

/// Normalized Hermite functions h_0(t) .. h_nmax(t), orthonormal on the real line.
std::vector<double> hermite_functions(int nmax, double t);

/// Orthonormal Hermite polynomials p_0(t) .. p_nmax(t) for the weight e^{-t^2}, so that
/// h_n(t) = p_n(t) e^{-t^2/2}. Pair with gauss_hermite for oscillator matrix elements.
std::vector<double> hermite_polynomials(int nmax, double t);

/// Oscillator eigenfunction of level n for unit mass and frequency nu.
double oscillator_wavefunction(int n, double nu, double x);

}  // namespace hotgate
