#include "hotgate/classical_noise.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <complex>
#include <sstream>

#include "hotgate/errors.hpp"
#include "hotgate/quadrature.hpp"
#include "hotgate/rng.hpp"

namespace hotgate {

namespace {

constexpr double kSingularGuard = 1e-9;
constexpr double kPruneWeight = 1e-18;

double guarded_coupling(const CouplingLaw& law, const SpatialVector& r, const SpatialVector& q) {
  const double r2 = squared_distance(r, q);
  if (r2 < kSingularGuard * kSingularGuard) {
    std::ostringstream os;
    os << "noise configuration brings two qubits within " << kSingularGuard
       << " of each other (singular coupling)";
    throw DomainError(os.str());
  }
  return law.at_squared_distance(r2);
}

void check_axes(const std::vector<int>& axes, std::size_t dim) {
  if (axes.empty()) throw ValidationError("noisy_axes must not be empty");
  for (std::size_t k = 0; k < axes.size(); ++k) {
    if (axes[k] < 0 || std::size_t(axes[k]) >= dim)
      throw ValidationError("noisy axis outside the layout dimension");
    for (std::size_t m = 0; m < k; ++m)
      if (axes[m] == axes[k]) throw ValidationError("noisy axis listed twice");
  }
}

// Standard-normal rule on [-9, 9] from `order` equal panels, each split further where the
// phase 2 mu dt can turn by more than kPanelPhase radians; rate(z) bounds that phase speed.
constexpr double kHalfWidth = 9.0;
constexpr double kPanelPhase = 2.0;
constexpr int kNodesPerPanel = 8;

QuadratureRule adaptive_normal_rule(int order, const std::function<double(double)>& rate) {
  if (order < 1) throw ValidationError("quadrature order must be >= 1");
  const double h0 = 2.0 * kHalfWidth / order;
  auto width = [&](double z) {
    const double r = rate(z);
    return r > 0.0 ? std::clamp(kPanelPhase / r, 1e-4 * h0, h0) : h0;
  };
  std::vector<double> edges{-kHalfWidth};
  while (edges.back() < kHalfWidth) {
    const double z = edges.back();
    double h = width(z);
    for (int refine = 0; refine < 8; ++refine) {
      const double h2 = std::min({h, width(z + h), width(z + 0.5 * h)});
      if (h2 >= h) break;
      h = h2;
    }
    edges.push_back(std::min(z + h, kHalfWidth));
  }
  const QuadratureRule gl = gauss_legendre(kNodesPerPanel);
  QuadratureRule rule;
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double mid = 0.5 * (edges[p] + edges[p + 1]), half = 0.5 * (edges[p + 1] - edges[p]);
    for (std::size_t k = 0; k < gl.size(); ++k) {
      const double z = mid + half * gl.nodes[k];
      rule.nodes.push_back(z);
      rule.weights.push_back(half * gl.weights[k] * std::exp(-0.5 * z * z));
      total += rule.weights.back();
    }
  }
  for (double& w : rule.weights) w /= total;
  return rule;
}

// Phase-speed bound along one noisy axis: sum over pair offsets of |d mu / dz| with every
// other noisy coordinate placed where it maximizes the coupling.
std::function<double(double)> phase_rate(const std::vector<SpatialVector>& offsets, const std::vector<int>& axes,
                                         std::size_t axis, double scale, const CouplingLaw& law, double dt) {
  if (dt <= 0.0 || law.J == 0.0 || scale == 0.0) return [](double) { return 0.0; };
  std::vector<double> along, perp2;
  for (const auto& off : offsets) {
    double p2 = 0.0;
    for (std::size_t c = 0; c < off.dim(); ++c)
      if (std::find(axes.begin(), axes.end(), int(c)) == axes.end()) p2 += off[c] * off[c];
    along.push_back(off[std::size_t(axes[axis])]);
    perp2.push_back(p2);
  }
  return [=](double z) {
    double r = 0.0;
    for (std::size_t k = 0; k < along.size(); ++k) {
      const double x = along[k] + scale * z;
      r += law.gamma * law.J * std::pow(x * x + perp2[k], -0.5 * (law.gamma + 1));
    }
    return 2.0 * dt * scale * r;
  };
}

// Standard-normal tensor rule from per-axis rules; tiny products are pruned.
struct NormalGrid {
  std::vector<double> points;  // dims per node
  std::vector<double> weights;
};

NormalGrid normal_grid(const std::vector<QuadratureRule>& rules, bool degenerate) {
  const std::size_t dims = rules.size();
  NormalGrid g;
  if (degenerate) {
    g.points.assign(dims, 0.0);
    g.weights = {1.0};
    return g;
  }
  std::size_t total = 1;
  for (const auto& r : rules) total *= r.size();
  std::vector<std::size_t> idx(dims, 0);
  double kept = 0.0;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    double w = 1.0;
    for (std::size_t d = dims; d-- > 0;) {
      idx[d] = rem % rules[d].size();
      rem /= rules[d].size();
      w *= rules[d].weights[idx[d]];
    }
    if (w < kPruneWeight) continue;
    for (std::size_t d = 0; d < dims; ++d) g.points.push_back(rules[d].nodes[idx[d]]);
    g.weights.push_back(w);
    kept += w;
  }
  for (double& w : g.weights) w /= kept;
  return g;
}

// Tensor grids resolve the largest dt (halving from resolve_dt) that keeps every axis
// within this many nodes.
constexpr std::size_t kMaxAxisNodes = 800;

NormalGrid model_grid(const std::vector<SpatialVector>& offsets, const std::vector<int>& axes, double scale,
                      const CouplingLaw& law, int order, double resolve_dt, bool degenerate) {
  std::vector<QuadratureRule> rules(axes.size());
  if (!degenerate) {
    for (double dt = resolve_dt;; dt *= 0.5) {
      bool fits = true;
      for (std::size_t d = 0; d < axes.size(); ++d) {
        rules[d] = adaptive_normal_rule(order, phase_rate(offsets, axes, d, scale, law, dt));
        fits = fits && (axes.size() == 1 || rules[d].size() <= kMaxAxisNodes);
      }
      if (fits || dt == 0.0) break;
      if (dt < 1e-12) dt = 0.0;
    }
  }
  return normal_grid(rules, degenerate);
}

int default_order(std::size_t dims, int order) {
  if (order != 0) return order;
  return dims == 1 ? kDefaultOrder1D : kDefaultOrder2D;
}

SpatialVector zero_like(const SpatialVector& v) {
  SpatialVector z = v;
  for (std::size_t k = 0; k < 3; ++k) z[k] = 0.0;
  return z;
}

}  // namespace

double CouplingDistribution::total_weight() const {
  double s = 0.0;
  for (const auto& n : nodes) s += n.weight;
  return s;
}

double CouplingDistribution::mean() const {
  double s = 0.0;
  for (const auto& n : nodes) s += n.weight * n.mu_bar;
  return s;
}

ColdMediatorModel ColdMediatorModel::chain_1d(std::size_t n_a, double dx, double dy, double sigma) {
  std::vector<SpatialVector> chain;
  for (std::size_t i = 0; i < n_a; ++i) chain.push_back({double(i) * dx, 0.0});
  ColdMediatorModel m;
  m.chain = ModuleLayout(std::move(chain));
  m.center = SpatialVector{(double(n_a) - 1.0) * dx / 2.0, dy};
  m.sigma = sigma;
  m.noisy_axes = {0};
  m.validate();
  return m;
}

void ColdMediatorModel::validate() const {
  if (chain.size() == 0) throw ValidationError("cold mediator chain is empty");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ValidationError("sigma must be >= 0");
  if (center.dim() != chain.dim()) throw ValidationError("mediator center dimension mismatch");
  check_axes(noisy_axes, chain.dim());
}

CollectiveGaussianModel CollectiveGaussianModel::chains_1d(std::size_t n_a, std::size_t n_b,
                                                           double dx, double dy, double sigma) {
  std::vector<SpatialVector> ra, qb;
  for (std::size_t i = 0; i < n_a; ++i) ra.push_back({double(i) * dx, 0.0});
  for (std::size_t j = 0; j < n_b; ++j) qb.push_back({double(j) * dx, dy});
  CollectiveGaussianModel m;
  m.layout_a = ModuleLayout(std::move(ra));
  m.layout_b = ModuleLayout(std::move(qb));
  m.sigma = sigma;
  m.noisy_axes = {0};
  m.validate();
  return m;
}

void CollectiveGaussianModel::validate() const {
  if (layout_a.size() == 0 || layout_b.size() == 0) throw ValidationError("empty module layout");
  if (layout_a.dim() != layout_b.dim()) throw ValidationError("module layouts differ in dimension");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ValidationError("sigma must be >= 0");
  check_axes(noisy_axes, layout_a.dim());
}

IndependentDiscreteModel IndependentDiscreteModel::chains_1d(std::size_t n_a, std::size_t n_b,
                                                             double dx, double dy, double step,
                                                             double p0) {
  std::vector<SpatialVector> ra, qb;
  for (std::size_t i = 0; i < n_a; ++i) ra.push_back({double(i) * dx, dy});
  for (std::size_t j = 0; j < n_b; ++j) qb.push_back({double(j) * dx, 0.0});
  IndependentDiscreteModel m;
  m.layout_a = ModuleLayout(std::move(ra));
  m.layout_b = ModuleLayout(std::move(qb));
  const double side = (1.0 - p0) / 2.0;
  m.displacements = {{SpatialVector{0.0, -step}, side},
                     {SpatialVector{0.0, 0.0}, p0},
                     {SpatialVector{0.0, step}, side}};
  m.displacements.erase(std::remove_if(m.displacements.begin(), m.displacements.end(),
                                       [](const Displacement& d) { return d.probability == 0.0; }),
                        m.displacements.end());
  m.validate();
  return m;
}

void IndependentDiscreteModel::validate() const {
  if (layout_a.size() == 0 || layout_b.size() == 0) throw ValidationError("empty module layout");
  if (layout_a.dim() != layout_b.dim()) throw ValidationError("module layouts differ in dimension");
  if (displacements.empty()) throw ValidationError("displacement law needs at least one point");
  double total = 0.0;
  for (const auto& d : displacements) {
    if (!(d.probability > 0.0)) throw ValidationError("displacement probabilities must be > 0");
    if (d.offset.dim() != layout_a.dim()) throw ValidationError("displacement dimension mismatch");
    total += d.probability;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("displacement probabilities must sum to 1");
}

std::vector<double> CouplingTable::column_coefficients(std::span<const double> a,
                                                       std::span<const double> b) const {
  if (a.size() != n_a || b.size() != n_b) throw ValidationError("encoding size mismatch");
  std::vector<double> coeff(n_columns, 0.0);
  for (std::size_t i = 0; i < n_a; ++i)
    for (std::size_t j = 0; j < n_b; ++j) coeff[column_of_pair[i * n_b + j]] += a[i] * b[j];
  return coeff;
}

CouplingDistribution CouplingTable::distribution(std::span<const double> a,
                                                 std::span<const double> b) const {
  const auto coeff = column_coefficients(a, b);
  CouplingDistribution d;
  d.exact = exact;
  d.nodes.resize(size());
  for (std::size_t k = 0; k < size(); ++k) d.nodes[k] = {mu_bar(k, coeff), weights[k]};
  return d;
}

double CouplingTable::fidelity(std::span<const double> a, std::span<const double> b, double dt,
                               Exec exec) const {
  const auto coeff = column_coefficients(a, b);
  const double s = blocked_sum(size(), exec, [&](std::size_t k) {
    return weights[k] * std::sin(2.0 * mu_bar(k, coeff) * dt);
  });
  return std::clamp(0.5 + 0.5 * s, 0.0, 1.0);
}

CouplingTable table_cold_mediator(const ColdMediatorModel& model, const CouplingLaw& law, int order,
                                  Exec exec, double resolve_dt) {
  model.validate();
  if (!(resolve_dt >= 0.0)) throw ValidationError("resolve_dt must be >= 0");
  const std::size_t dims = model.noisy_axes.size();
  std::vector<SpatialVector> offsets;
  for (std::size_t i = 0; i < model.chain.size(); ++i) offsets.push_back(model.center - model.chain[i]);
  const NormalGrid grid = model_grid(offsets, model.noisy_axes, model.sigma, law, default_order(dims, order),
                                     resolve_dt, model.sigma == 0.0);
  CouplingTable t;
  t.n_a = model.chain.size();
  t.n_b = 1;
  t.n_columns = t.n_a;
  t.column_of_pair.resize(t.n_a);
  for (std::size_t i = 0; i < t.n_a; ++i) t.column_of_pair[i] = i;
  t.weights = grid.weights;
  t.values.resize(t.size() * t.n_columns);
  for_each_index(t.size(), exec, [&](std::size_t k) {
    SpatialVector q = model.center;
    for (std::size_t d = 0; d < dims; ++d)
      q[std::size_t(model.noisy_axes[d])] += model.sigma * grid.points[k * dims + d];
    for (std::size_t i = 0; i < t.n_a; ++i)
      t.values[k * t.n_columns + i] = guarded_coupling(law, model.chain[i], q);
  });
  return t;
}

CouplingTable table_collective(const CollectiveGaussianModel& model, const CouplingLaw& law,
                               int order, Exec exec, double resolve_dt) {
  model.validate();
  if (!(resolve_dt >= 0.0)) throw ValidationError("resolve_dt must be >= 0");
  CouplingTable t;
  t.n_a = model.layout_a.size();
  t.n_b = model.layout_b.size();
  // mu depends only on r0_i - q0_j + (r - q); equal offsets share a column
  std::vector<SpatialVector> offsets;
  t.column_of_pair.resize(t.n_a * t.n_b);
  for (std::size_t i = 0; i < t.n_a; ++i)
    for (std::size_t j = 0; j < t.n_b; ++j) {
      const SpatialVector off = model.layout_a[i] - model.layout_b[j];
      auto it = std::find(offsets.begin(), offsets.end(), off);
      t.column_of_pair[i * t.n_b + j] = std::size_t(it - offsets.begin());
      if (it == offsets.end()) offsets.push_back(off);
    }
  t.n_columns = offsets.size();
  const std::size_t dims = model.noisy_axes.size();
  const double spread = std::sqrt(2.0) * model.sigma;  // r - q has variance 2 sigma^2
  std::vector<SpatialVector> pair_offsets;
  for (std::size_t i = 0; i < t.n_a; ++i)
    for (std::size_t j = 0; j < t.n_b; ++j) pair_offsets.push_back(model.layout_a[i] - model.layout_b[j]);
  const NormalGrid grid = model_grid(pair_offsets, model.noisy_axes, spread, law, default_order(dims, order),
                                     resolve_dt, model.sigma == 0.0);
  t.weights = grid.weights;
  t.values.resize(t.size() * t.n_columns);
  const SpatialVector origin = zero_like(offsets.front());
  for_each_index(t.size(), exec, [&](std::size_t k) {
    SpatialVector delta = origin;
    for (std::size_t d = 0; d < dims; ++d)
      delta[std::size_t(model.noisy_axes[d])] = spread * grid.points[k * dims + d];
    for (std::size_t c = 0; c < t.n_columns; ++c)
      t.values[k * t.n_columns + c] = guarded_coupling(law, offsets[c] + delta, origin);
  });
  return t;
}

IndependentTable table_independent(const IndependentDiscreteModel& model, const CouplingLaw& law) {
  model.validate();
  IndependentTable t;
  t.n_a = model.layout_a.size();
  t.n_b = model.layout_b.size();
  t.kappa = model.displacements.size();
  for (const auto& d : model.displacements) t.probabilities.push_back(d.probability);
  t.pair_values.resize(t.n_a * t.n_b * t.kappa * t.kappa);
  for (std::size_t i = 0; i < t.n_a; ++i)
    for (std::size_t j = 0; j < t.n_b; ++j)
      for (std::size_t k = 0; k < t.kappa; ++k)
        for (std::size_t l = 0; l < t.kappa; ++l)
          t.pair_values[((i * t.n_b + j) * t.kappa + k) * t.kappa + l] =
              guarded_coupling(law, model.layout_a[i] + model.displacements[k].offset,
                               model.layout_b[j] + model.displacements[l].offset);
  return t;
}

double IndependentTable::fidelity(std::span<const double> a, std::span<const double> b, double dt,
                                  Exec exec) const {
  if (a.size() != n_a || b.size() != n_b) throw ValidationError("encoding size mismatch");
  std::size_t configs_b = 1;
  for (std::size_t j = 0; j < n_b; ++j) configs_b *= kappa;
  // For a fixed B configuration the A qubits are independent:
  // E_A[exp(2i dt mu)] = prod_i sum_k p_k exp(2i dt a_i sum_j b_j mu_ij(k, l_j)).
  const double s = blocked_sum(configs_b, exec, [&](std::size_t flat) {
    std::vector<std::size_t> l(n_b);
    double p_b = 1.0;
    std::size_t rem = flat;
    for (std::size_t j = n_b; j-- > 0;) {
      l[j] = rem % kappa;
      rem /= kappa;
      p_b *= probabilities[l[j]];
    }
    std::complex<double> prod(1.0, 0.0);
    for (std::size_t i = 0; i < n_a; ++i) {
      std::complex<double> factor(0.0, 0.0);
      for (std::size_t k = 0; k < kappa; ++k) {
        double g = 0.0;
        for (std::size_t j = 0; j < n_b; ++j) g += b[j] * pair(i, j, k, l[j]);
        factor += probabilities[k] * std::polar(1.0, 2.0 * dt * a[i] * g);
      }
      prod *= factor;
    }
    return p_b * prod.imag();
  });
  return std::clamp(0.5 + 0.5 * s, 0.0, 1.0);
}

CouplingDistribution distribution_cold_mediator(const ColdMediatorModel& model, const LogicalVector& a,
                                                double b1, const CouplingLaw& law, int order) {
  if (a.size() != model.chain.size()) throw ValidationError("logical vector a does not match chain");
  if (!(b1 >= -1.0 && b1 <= 1.0)) throw ValidationError("b1 must lie in [-1, 1]");
  const double b[1] = {b1};
  return table_cold_mediator(model, law, order).distribution(a.entries(), b);
}

CouplingDistribution distribution_collective(const CollectiveGaussianModel& model,
                                             const LogicalVector& a, const LogicalVector& b,
                                             const CouplingLaw& law, int order) {
  return table_collective(model, law, order).distribution(a.entries(), b.entries());
}

CouplingDistribution distribution_independent(const IndependentDiscreteModel& model,
                                              const LogicalVector& a, const LogicalVector& b,
                                              const CouplingLaw& law, Exec exec) {
  const IndependentTable t = table_independent(model, law);
  if (a.size() != t.n_a || b.size() != t.n_b) throw ValidationError("encoding size mismatch");
  const std::size_t n = t.n_a + t.n_b;
  std::uint64_t total = 1;
  for (std::size_t q = 0; q < n; ++q) {
    total *= t.kappa;
    if (total > model.enumeration_cap) {
      std::ostringstream os;
      os << "independent model needs " << t.kappa << "^" << n
         << " configurations, above the enumeration cap of " << model.enumeration_cap
         << "; reduce N_A + N_B or the number of displacement points";
      throw SizeError(os.str());
    }
  }
  CouplingDistribution d;
  d.exact = true;
  d.nodes.resize(total);
  for_each_index(total, exec, [&](std::size_t flat) {
    std::vector<std::size_t> digit(n);
    std::size_t rem = flat;
    double w = 1.0;
    for (std::size_t q = n; q-- > 0;) {
      digit[q] = rem % t.kappa;
      rem /= t.kappa;
      w *= t.probabilities[digit[q]];
    }
    double mu = 0.0;
    for (std::size_t i = 0; i < t.n_a; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < t.n_b; ++j) row += b[j] * t.pair(i, j, digit[i], digit[t.n_a + j]);
      mu += a[i] * row;
    }
    d.nodes[flat] = {mu, w};
  });
  return d;
}

std::vector<double> sample_coupling(const ColdMediatorModel& model, const LogicalVector& a, double b1,
                                    const CouplingLaw& law, std::uint64_t seed, std::size_t n,
                                    Exec exec) {
  model.validate();
  if (n < 1) throw ValidationError("sample count must be >= 1");
  if (a.size() != model.chain.size()) throw ValidationError("logical vector a does not match chain");
  std::vector<double> out(n);
  for_each_index(n, exec, [&](std::size_t k) {
    CounterRng rng(seed, k);
    SpatialVector q = model.center;
    for (int axis : model.noisy_axes) q[std::size_t(axis)] += model.sigma * rng.normal();
    double mu = 0.0;
    for (std::size_t i = 0; i < model.chain.size(); ++i) mu += a[i] * guarded_coupling(law, model.chain[i], q);
    out[k] = b1 * mu;
  });
  return out;
}

std::vector<double> sample_coupling(const CollectiveGaussianModel& model, const LogicalVector& a,
                                    const LogicalVector& b, const CouplingLaw& law,
                                    std::uint64_t seed, std::size_t n, Exec exec) {
  model.validate();
  if (n < 1) throw ValidationError("sample count must be >= 1");
  if (a.size() != model.layout_a.size() || b.size() != model.layout_b.size())
    throw ValidationError("encoding size mismatch");
  std::vector<double> out(n);
  const SpatialVector origin = zero_like(model.layout_a[0]);
  for_each_index(n, exec, [&](std::size_t k) {
    CounterRng rng(seed, k);
    SpatialVector r = origin, q = origin;
    for (int axis : model.noisy_axes) r[std::size_t(axis)] = model.sigma * rng.normal();
    for (int axis : model.noisy_axes) q[std::size_t(axis)] = model.sigma * rng.normal();
    double mu = 0.0;
    for (std::size_t i = 0; i < model.layout_a.size(); ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < model.layout_b.size(); ++j)
        row += b[j] * guarded_coupling(law, model.layout_a[i] + r, model.layout_b[j] + q);
      mu += a[i] * row;
    }
    out[k] = mu;
  });
  return out;
}

std::vector<double> sample_coupling(const IndependentDiscreteModel& model, const LogicalVector& a,
                                    const LogicalVector& b, const CouplingLaw& law,
                                    std::uint64_t seed, std::size_t n, Exec exec) {
  const IndependentTable t = table_independent(model, law);
  if (n < 1) throw ValidationError("sample count must be >= 1");
  if (a.size() != t.n_a || b.size() != t.n_b) throw ValidationError("encoding size mismatch");
  std::vector<double> cdf(t.kappa);
  double acc = 0.0;
  for (std::size_t k = 0; k < t.kappa; ++k) cdf[k] = (acc += t.probabilities[k]);
  std::vector<double> out(n);
  for_each_index(n, exec, [&](std::size_t s) {
    CounterRng rng(seed, s);
    auto draw = [&] {
      const double u = rng.uniform() * acc;
      std::size_t k = 0;
      while (k + 1 < t.kappa && u >= cdf[k]) ++k;
      return k;
    };
    std::vector<std::size_t> ka(t.n_a), lb(t.n_b);
    for (auto& k : ka) k = draw();
    for (auto& l : lb) l = draw();
    double mu = 0.0;
    for (std::size_t i = 0; i < t.n_a; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < t.n_b; ++j) row += b[j] * t.pair(i, j, ka[i], lb[j]);
      mu += a[i] * row;
    }
    out[s] = mu;
  });
  return out;
}

}  // namespace hotgate
