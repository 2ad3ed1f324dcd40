#include "hotgate/paul_trap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include "hotgate/errors.hpp"
#include "hotgate/quadrature.hpp"

namespace hotgate {

void TrapSpec::validate() const {
  if (n_ions < 1 || n_ions > kMaxChainIons) {
    std::ostringstream os;
    os << "ion count must lie in [1, " << kMaxChainIons << "]";
    throw ValidationError(os.str());
  }
  if (!(omega > 0.0) || !std::isfinite(omega)) throw ValidationError("trap frequency omega must be > 0");
  if (!(length_scale > 0.0) || !std::isfinite(length_scale))
    throw ValidationError("trap length scale L must be > 0");
}

namespace {

double chain_potential(std::span<const double> x) {
  double v = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    v += 0.5 * x[i] * x[i];
    for (std::size_t j = i + 1; j < x.size(); ++j) v += 1.0 / std::abs(x[i] - x[j]);
  }
  return v;
}

Eigen::VectorXd chain_gradient(std::span<const double> x) {
  Eigen::VectorXd g(Eigen::Index(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    double gi = x[i];
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j == i) continue;
      const double d = x[i] - x[j];
      gi -= (d > 0.0 ? 1.0 : -1.0) / (d * d);
    }
    g(Eigen::Index(i)) = gi;
  }
  return g;
}

bool strictly_ascending(std::span<const double> x) {
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) return false;
  return true;
}

}  // namespace

Eigen::MatrixXd chain_hessian(std::span<const double> x) {
  const Eigen::Index n = Eigen::Index(x.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double c = 2.0 / std::pow(std::abs(x[std::size_t(i)] - x[std::size_t(j)]), 3);
      h(i, i) += c;
      h(i, j) = -c;
    }
  return h;
}

std::vector<double> equilibrium_positions(std::size_t K) {
  TrapSpec{K, 1.0, 1.0}.validate();
  std::vector<double> x(K);
  if (K == 1) return {0.0};
  const double h = 2.0 / std::pow(double(K), 0.56);
  for (std::size_t i = 0; i < K; ++i) x[i] = (double(i) - (double(K) - 1.0) / 2.0) * h;

  // damped Newton with backtracking on the potential
  for (int it = 0; it < 200; ++it) {
    const Eigen::VectorXd g = chain_gradient(x);
    if (g.lpNorm<Eigen::Infinity>() < 1e-15) break;
    const Eigen::VectorXd p = chain_hessian(x).ldlt().solve(-g);
    const double v0 = chain_potential(x);
    double t = 1.0;
    std::vector<double> trial(K);
    // near the minimum the potential cannot resolve the decrease, so take full steps
    const bool close = g.lpNorm<Eigen::Infinity>() < 1e-6;
    for (int back = 0; back < 60; ++back, t *= 0.5) {
      for (std::size_t i = 0; i < K; ++i) trial[i] = x[i] + t * p(Eigen::Index(i));
      if (strictly_ascending(trial) && (close || chain_potential(trial) <= v0 + 1e-4 * t * g.dot(p))) break;
    }
    x = trial;
    if (t * p.lpNorm<Eigen::Infinity>() < 1e-16) break;
  }
  for (std::size_t i = 0; i < K / 2; ++i) {
    const double m = 0.5 * (x[K - 1 - i] - x[i]);
    x[i] = -m;
    x[K - 1 - i] = m;
  }
  if (K % 2 == 1) x[K / 2] = 0.0;
  const double residual = chain_gradient(x).norm();
  if (!(residual < 1e-12) || !strictly_ascending(x)) {
    std::ostringstream os;
    os << "equilibrium solve for K = " << K << " did not converge (gradient norm " << residual << ")";
    throw NumericError(os.str());
  }
  return x;
}

ModeDecomposition mode_decomposition(const TrapSpec& spec) {
  spec.validate();
  const std::vector<double> xbar = equilibrium_positions(spec.n_ions);
  const Eigen::MatrixXd h = chain_hessian(xbar);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) throw NumericError("Hessian eigendecomposition failed");
  ModeDecomposition md;
  const Eigen::Index n = h.rows();
  for (Eigen::Index m = 1; m < n; ++m)
    if (es.eigenvalues()(m) - es.eigenvalues()(m - 1) < 1e-10)
      throw NumericError("degenerate normal-mode eigenvalues");
  md.mode_vectors = es.eigenvectors();
  for (Eigen::Index m = 0; m < n; ++m) {
    Eigen::Index lead = 0;
    while (lead + 1 < n && std::abs(md.mode_vectors(lead, m)) < 1e-8) ++lead;
    if (md.mode_vectors(lead, m) < 0.0) md.mode_vectors.col(m) *= -1.0;
    md.lambdas.push_back(es.eigenvalues()(m));
    md.frequencies.push_back(std::sqrt(es.eigenvalues()(m)) * spec.omega);
  }
  for (double x : xbar) md.equilibrium.push_back(spec.length_scale * x);
  md.reconstruction_error =
      (md.mode_vectors * es.eigenvalues().asDiagonal() * md.mode_vectors.transpose() - h).cwiseAbs().maxCoeff();
  return md;
}

ThermalTruncation thermal_truncation(std::span<const double> frequencies, double T, double epsilon,
                                     std::size_t cap) {
  if (frequencies.empty()) throw ValidationError("thermal truncation needs at least one mode");
  for (double nu : frequencies)
    if (!(nu > 0.0) || !std::isfinite(nu)) throw ValidationError("mode frequencies must be > 0");
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("temperature T must be > 0");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("epsilon must lie in (0, 1)");

  const std::size_t modes = frequencies.size();
  double e0 = 0.0, z_rel = 1.0;  // partition function relative to the ground state
  for (double nu : frequencies) {
    e0 += 0.5 * nu;
    z_rel /= -std::expm1(-nu / T);
  }
  const double target = (1.0 - epsilon) * z_rel;

  struct Node {
    double excitation;
    std::vector<int> occ;
    std::size_t last;
  };
  auto later = [](const Node& x, const Node& y) {
    if (x.excitation != y.excitation) return x.excitation > y.excitation;
    return x.occ > y.occ;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(later)> queue(later);
  queue.push({0.0, std::vector<int>(modes, 0), 0});

  ThermalTruncation out;
  out.temperature = T;
  out.epsilon = epsilon;
  double mass = 0.0;
  // children only raise modes at or after the last raised one, so each vector appears once
  while (mass < target) {
    if (out.states.size() >= cap) {
      std::ostringstream os;
      os << "thermal truncation needs more than " << cap
         << " states; increase epsilon or lower the temperature";
      throw SizeError(os.str());
    }
    Node node = queue.top();
    queue.pop();
    const double w = std::exp(-node.excitation / T);
    mass += w;
    for (std::size_t m = node.last; m < modes; ++m) {
      Node child{0.0, node.occ, m};
      ++child.occ[m];
      for (std::size_t k = 0; k < modes; ++k) child.excitation += frequencies[k] * child.occ[k];
      queue.push(std::move(child));
    }
    out.states.push_back({std::move(node.occ), e0 + node.excitation, w});
  }
  for (auto& s : out.states) s.probability /= mass;
  out.retained_mass = mass / z_rel;
  return out;
}

ThermalTruncation thermal_truncation(const ModeDecomposition& modes, double T, double epsilon,
                                     std::size_t cap) {
  return thermal_truncation(modes.frequencies, T, epsilon, cap);
}

ThermalTruncation thermal_truncation(const ModeDecomposition& modes_a, const ModeDecomposition& modes_b,
                                     double T, double epsilon, std::size_t cap) {
  std::vector<double> f = modes_a.frequencies;
  f.insert(f.end(), modes_b.frequencies.begin(), modes_b.frequencies.end());
  return thermal_truncation(f, T, epsilon, cap);
}

TrapPairConfig TrapPairConfig::single_trap(std::size_t K, double omega, double L, CouplingLaw law) {
  TrapPairConfig c;
  c.variant = TrapVariant::single_trap_split;
  c.trap_a = {K, omega, L};
  c.law = law;
  c.a = LogicalVector::ones(c.size_a());
  c.b = LogicalVector::ones(c.size_b());
  c.validate();
  return c;
}

TrapPairConfig TrapPairConfig::cold_mediator(std::size_t n_a, double omega_a, double omega_b, double L,
                                             double dy, CouplingLaw law) {
  TrapPairConfig c;
  c.variant = TrapVariant::cold_mediator;
  c.trap_a = {n_a, omega_a, L};
  c.trap_b = TrapSpec{1, omega_b, L};
  c.dy = dy;
  c.law = law;
  c.a = LogicalVector::ones(n_a);
  c.b = LogicalVector::ones(1);
  c.validate();
  return c;
}

TrapPairConfig TrapPairConfig::twin_traps(std::size_t n, double omega_a, double omega_b, double L,
                                          double dy, CouplingLaw law) {
  TrapPairConfig c;
  c.variant = TrapVariant::twin_traps;
  c.trap_a = {n, omega_a, L};
  c.trap_b = TrapSpec{n, omega_b, L};
  c.dy = dy;
  c.law = law;
  c.a = LogicalVector::ones(n);
  c.b = LogicalVector::ones(n);
  c.validate();
  return c;
}

std::size_t TrapPairConfig::size_a() const {
  return variant == TrapVariant::single_trap_split ? (trap_a.n_ions + 1) / 2 : trap_a.n_ions;
}

std::size_t TrapPairConfig::size_b() const {
  if (variant == TrapVariant::single_trap_split) return trap_a.n_ions / 2;
  return trap_b ? trap_b->n_ions : 0;
}

void TrapPairConfig::validate() const {
  trap_a.validate();
  if (variant == TrapVariant::single_trap_split) {
    if (trap_a.n_ions < 2) throw ValidationError("a split trap needs at least 2 ions");
    if (trap_b) throw ValidationError("a split trap has no second trap");
  } else {
    if (!trap_b) throw ValidationError("two-trap variants need trap B");
    trap_b->validate();
    if (variant == TrapVariant::cold_mediator && trap_b->n_ions != 1)
      throw ValidationError("the cold-mediator variant has a single ion in trap B");
    if (std::abs(trap_a.length_scale - trap_b->length_scale) > 1e-12 * trap_a.length_scale)
      throw ValidationError("both traps must share the length scale L");
    if (!(dy > 0.0) || !std::isfinite(dy)) throw ValidationError("trap separation dy must be > 0");
  }
  if (a.size() != size_a() || b.size() != size_b())
    throw ValidationError("logical vectors do not match the module sizes");
}

TrapSystem build_trap_system(const TrapPairConfig& config) {
  config.validate();
  TrapSystem sys;
  sys.config = config;
  sys.modes_a = mode_decomposition(config.trap_a);
  sys.frequencies = sys.modes_a.frequencies;
  const std::size_t na = config.size_a(), nb = config.size_b();
  const Eigen::MatrixXd& va = sys.modes_a.mode_vectors;
  const std::vector<double>& xa = sys.modes_a.equilibrium;

  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < xa.size(); ++i) min_gap = std::min(min_gap, xa[i] - xa[i - 1]);

  if (config.variant == TrapVariant::single_trap_split) {
    const std::size_t K = xa.size();
    auto line_pair = [&](std::size_t lo, std::size_t hi) {
      PairGeometry p;
      p.d0 = xa[hi] - xa[lo];
      p.c.resize(K);
      for (std::size_t m = 0; m < K; ++m) p.c[m] = va(Eigen::Index(hi), Eigen::Index(m)) - va(Eigen::Index(lo), Eigen::Index(m));
      return p;
    };
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < nb; ++j) sys.cross.push_back(line_pair(i, na + j));
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t k = i + 1; k < na; ++k) sys.self_a.push_back(line_pair(i, k));
    for (std::size_t j = 0; j < nb; ++j)
      for (std::size_t k = j + 1; k < nb; ++k) sys.self_b.push_back(line_pair(na + j, na + k));
  } else {
    sys.modes_b = mode_decomposition(*config.trap_b);
    const Eigen::MatrixXd& vb = sys.modes_b->mode_vectors;
    const std::vector<double>& xb = sys.modes_b->equilibrium;
    for (std::size_t j = 1; j < xb.size(); ++j) min_gap = std::min(min_gap, xb[j] - xb[j - 1]);
    sys.frequencies.insert(sys.frequencies.end(), sys.modes_b->frequencies.begin(), sys.modes_b->frequencies.end());
    const std::size_t ma = xa.size(), mb = xb.size();
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < nb; ++j) {
        PairGeometry p;
        p.d0 = xb[j] - xa[i];
        p.transverse = config.dy;
        p.c.assign(ma + mb, 0.0);
        for (std::size_t m = 0; m < ma; ++m) p.c[m] = -va(Eigen::Index(i), Eigen::Index(m));
        for (std::size_t m = 0; m < mb; ++m) p.c[ma + m] = vb(Eigen::Index(j), Eigen::Index(m));
        sys.cross.push_back(std::move(p));
      }
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t k = i + 1; k < na; ++k) {
        PairGeometry p;
        p.d0 = xa[k] - xa[i];
        p.c.assign(ma + mb, 0.0);
        for (std::size_t m = 0; m < ma; ++m) p.c[m] = va(Eigen::Index(k), Eigen::Index(m)) - va(Eigen::Index(i), Eigen::Index(m));
        sys.self_a.push_back(std::move(p));
      }
    for (std::size_t j = 0; j < nb; ++j)
      for (std::size_t k = j + 1; k < nb; ++k) {
        PairGeometry p;
        p.d0 = xb[k] - xb[j];
        p.c.assign(ma + mb, 0.0);
        for (std::size_t m = 0; m < mb; ++m) p.c[ma + m] = vb(Eigen::Index(k), Eigen::Index(m)) - vb(Eigen::Index(j), Eigen::Index(m));
        sys.self_b.push_back(std::move(p));
      }
  }
  sys.guard = std::isfinite(min_gap) ? 0.1 * min_gap : 0.0;
  return sys;
}

namespace {

// e^{-x/2} L_n(x), scaled from the start so large x cannot overflow.
double laguerre_factor(int n, double x) {
  const double e = std::exp(-0.5 * x);
  double prev = e;
  if (n == 0) return prev;
  double cur = (1.0 - x) * e;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

// Point beyond which e^{-x/2} |L_n(x)| stays below 1e-17.
double laguerre_tail(int n) {
  double x = 4.0 * n + 2.0;
  while (std::abs(laguerre_factor(n, x)) >= 1e-17) x += 1.0;
  return x;
}

}  // namespace

PairExpectation pair_expectation(const PairGeometry& pair, const CouplingLaw& law,
                                 std::span<const double> frequencies, std::span<const int> occupation,
                                 double guard, int order) {
  if (order < 1) throw ValidationError("pair quadrature order must be >= 1");
  if (pair.c.size() != frequencies.size() || occupation.size() != frequencies.size())
    throw ValidationError("mode data sizes differ");
  const bool same_line = pair.transverse == 0.0;
  const double t2 = pair.transverse * pair.transverse;
  auto f = [&](double s) {
    const double d = pair.d0 + s;
    const double r2 = d * d + t2;
    return law.at_squared_distance(r2);
  };

  // each mode contributes e^{-b k^2 / 2} L_n(b k^2) to the characteristic function of s
  std::vector<double> bm;
  std::vector<int> nm;
  double var = 0.0, kmax = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < pair.c.size(); ++m) {
    if (std::abs(pair.c[m]) < 1e-15) continue;
    const double b = pair.c[m] * pair.c[m] / (2.0 * frequencies[m]);
    bm.push_back(b);
    nm.push_back(occupation[m]);
    var += b * (2.0 * occupation[m] + 1.0);
    kmax = std::min(kmax, std::sqrt(laguerre_tail(occupation[m]) / b));
  }
  PairExpectation out;
  if (bm.empty()) {
    if (same_line && std::abs(pair.d0) <= guard) throw DomainError("ion pair sits inside the guard distance");
    out.value = f(0.0);
    return out;
  }
  const double S = 10.0 * std::sqrt(var);
  const std::size_t nk = std::max<std::size_t>(8, std::size_t(std::ceil(kmax * S / std::numbers::pi)));
  const double dk = kmax / double(nk);
  std::vector<double> phi(nk + 1);
  for (std::size_t j = 0; j <= nk; ++j) {
    const double k2 = double(j) * dk * double(j) * dk;
    double v = 1.0;
    for (std::size_t m = 0; m < bm.size(); ++m) v *= laguerre_factor(nm[m], bm[m] * k2);
    phi[j] = v * (j == 0 || j == nk ? 0.5 : 1.0) * dk / std::numbers::pi;
  }

  double lo = -S, hi = S;
  bool restricted = false;
  if (same_line) {
    if (!(guard > 0.0)) throw DomainError("same-line ion pair needs a positive guard distance");
    // the pair collides at s = -d0; keep separations at least `guard` on the d0 side
    if (pair.d0 > 0.0 && -pair.d0 + guard > lo) {
      lo = -pair.d0 + guard;
      restricted = true;
    } else if (pair.d0 < 0.0 && -pair.d0 - guard < hi) {
      hi = -pair.d0 - guard;
      restricted = true;
    }
    if (!(hi > lo)) throw DomainError("ion pair thermal spread lies entirely inside the guard distance");
  }
  const int panels = std::max(1, int(std::ceil((hi - lo) * kmax / std::numbers::pi)));
  const QuadratureRule rule = composite_gauss_legendre(lo, hi, panels, order);
  double value = 0.0, mass = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double s = rule.nodes[q];
    // density by the cosine series, cos(j dk s) from the Chebyshev recurrence
    const double c1 = std::cos(dk * s);
    double cm = 1.0, c = c1, rho = phi[0];
    for (std::size_t j = 1; j <= nk; ++j) {
      rho += phi[j] * c;
      const double next = 2.0 * c1 * c - cm;
      cm = c;
      c = next;
    }
    const double w = rule.weights[q] * rho;
    mass += w;
    value += w * f(s);
  }
  out.value = value;
  out.discarded_mass = restricted ? std::max(0.0, 1.0 - mass) : 0.0;
  return out;
}

double diagonal_mode_coupling(const TrapSystem& system, std::span<const int> occupation, int order) {
  const std::size_t na = system.config.size_a(), nb = system.config.size_b();
  double total = 0.0;
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      const double w = system.config.a[i] * system.config.b[j];
      if (w == 0.0) continue;
      total += w * pair_expectation(system.cross[i * nb + j], system.config.law, system.frequencies,
                                    occupation, system.guard, order)
                       .value;
    }
  return total;
}

PaulTable build_paul_table(const TrapSystem& system, const PaulTableOptions& options) {
  PaulTable t;
  t.thermal = thermal_truncation(system.frequencies, options.temperature, options.epsilon, options.state_cap);
  const std::size_t states = t.thermal.states.size();
  const std::size_t na = system.config.size_a(), nb = system.config.size_b();
  t.cross.n_a = na;
  t.cross.n_b = nb;
  t.cross.n_columns = na * nb;
  t.cross.column_of_pair.resize(na * nb);
  for (std::size_t p = 0; p < na * nb; ++p) t.cross.column_of_pair[p] = p;
  for (const auto& s : t.thermal.states) t.cross.weights.push_back(s.probability);
  t.cross.values.resize(states * na * nb);
  if (options.include_self) {
    t.self_a_pairs = system.self_a.size();
    t.self_b_pairs = system.self_b.size();
    t.self_a.resize(states * t.self_a_pairs);
    t.self_b.resize(states * t.self_b_pairs);
  }
  std::vector<double> discarded(states, 0.0);
  for_each_index(states, options.exec, [&](std::size_t k) {
    const auto& occ = t.thermal.states[k].occupation;
    double worst = 0.0;
    auto eval = [&](const PairGeometry& p) {
      const PairExpectation e = pair_expectation(p, system.config.law, system.frequencies, occ, system.guard, options.order);
      worst = std::max(worst, e.discarded_mass);
      return e.value;
    };
    for (std::size_t p = 0; p < na * nb; ++p) t.cross.values[k * na * nb + p] = eval(system.cross[p]);
    for (std::size_t p = 0; p < t.self_a_pairs; ++p) t.self_a[k * t.self_a_pairs + p] = eval(system.self_a[p]);
    for (std::size_t p = 0; p < t.self_b_pairs; ++p) t.self_b[k * t.self_b_pairs + p] = eval(system.self_b[p]);
    discarded[k] = worst;
  });
  t.max_discarded_mass = *std::max_element(discarded.begin(), discarded.end());
  if (t.max_discarded_mass > options.max_discarded_mass) {
    std::ostringstream os;
    os << "thermal ion excursions reach the same-line guard distance (discarded probability "
       << t.max_discarded_mass << " > " << options.max_discarded_mass
       << "); the small-displacement model is not valid here";
    throw DomainError(os.str());
  }
  t.min_level_spacing = *std::min_element(system.frequencies.begin(), system.frequencies.end());
  return t;
}

double scale_separation(const PaulTable& table, std::span<const double> a, std::span<const double> b) {
  const auto coeff = table.cross.column_coefficients(a, b);
  double mu_max = 0.0;
  for (std::size_t k = 0; k < table.cross.size(); ++k)
    mu_max = std::max(mu_max, std::abs(table.cross.mu_bar(k, coeff)));
  return mu_max > 0.0 ? table.min_level_spacing / mu_max : std::numeric_limits<double>::infinity();
}

double nondegenerate_fidelity(const PaulTable& table, std::span<const double> a, std::span<const double> b,
                              GateTime t, bool include_self) {
  const std::size_t states = table.cross.size();
  const bool has_self = table.self_a.size() == states * table.self_a_pairs &&
                        table.self_b.size() == states * table.self_b_pairs &&
                        (table.self_a_pairs + table.self_b_pairs == 0 || !table.self_a.empty() || !table.self_b.empty());
  if (include_self && !has_self) throw ValidationError("table was built without self-interaction terms");
  const auto coeff = table.cross.column_coefficients(a, b);
  const double dt = t;
  Matrix16c choi = Matrix16c::Zero();
  for (std::size_t k = 0; k < states; ++k) {
    const double mu = table.cross.mu_bar(k, coeff);
    double self = 0.0;
    if (include_self) {
      std::size_t p = 0;
      for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t i2 = i + 1; i2 < a.size(); ++i2, ++p) self += a[i] * a[i2] * table.self_a[k * table.self_a_pairs + p];
      p = 0;
      for (std::size_t j = 0; j < b.size(); ++j)
        for (std::size_t j2 = j + 1; j2 < b.size(); ++j2, ++p) self += b[j] * b[j2] * table.self_b[k * table.self_b_pairs + p];
    }
    std::array<cdouble, 4> phase;
    for (int s = 0; s < 4; ++s) phase[std::size_t(s)] = std::polar(1.0, -(zz_parity(s) * mu + self) * dt);
    const double w = table.cross.weights[k];
    for (int s = 0; s < 4; ++s)
      for (int s2 = 0; s2 < 4; ++s2)
        choi(s * 4 + s, s2 * 4 + s2) += w * phase[std::size_t(s)] * std::conj(phase[std::size_t(s2)]);
  }
  return choi_fidelity(TwoQubitChannel::from_choi(choi), std::numbers::pi / 4.0);
}

double nondegenerate_fidelity(const TrapPairConfig& config, double T, double epsilon, GateTime t) {
  const TrapSystem sys = build_trap_system(config);
  PaulTableOptions opt;
  opt.temperature = T;
  opt.epsilon = epsilon;
  const PaulTable table = build_paul_table(sys, opt);
  return nondegenerate_fidelity(table, config.a.entries(), config.b.entries(), t, false);
}

std::array<Eigen::MatrixXd, 2> twin_trap_fock_blocks(const TrapSystem& system, int n_max, int quadrature_order) {
  if (system.config.variant == TrapVariant::single_trap_split || system.config.size_a() != 1 ||
      system.config.size_b() != 1)
    throw ValidationError("Fock blocks are built for two traps with one ion each");
  if (n_max < 0) throw ValidationError("Fock cutoff must be >= 0");
  const double nu_a = system.frequencies[0], nu_b = system.frequencies[1];
  const PairGeometry& pair = system.cross[0];
  const QuadratureRule gh = gauss_hermite(quadrature_order);
  const int levels = n_max + 1;
  const Eigen::Index dim = Eigen::Index(levels) * levels;
  Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(dim, dim);
  const double t2 = pair.transverse * pair.transverse;
  for (std::size_t u = 0; u < gh.size(); ++u) {
    const auto pu = hermite_polynomials(n_max, gh.nodes[u]);
    for (std::size_t v = 0; v < gh.size(); ++v) {
      const auto pv = hermite_polynomials(n_max, gh.nodes[v]);
      const double s = pair.d0 + pair.c[0] * gh.nodes[u] / std::sqrt(nu_a) + pair.c[1] * gh.nodes[v] / std::sqrt(nu_b);
      const double g = gh.weights[u] * gh.weights[v] * system.config.law.at_squared_distance(s * s + t2);
      Eigen::VectorXd amp(dim);
      for (int m = 0; m < levels; ++m)
        for (int n = 0; n < levels; ++n) amp(m * levels + n) = pu[std::size_t(m)] * pv[std::size_t(n)];
      mu.noalias() += g * amp * amp.transpose();
    }
  }
  Eigen::MatrixXd hm = Eigen::MatrixXd::Zero(dim, dim);
  for (int m = 0; m < levels; ++m)
    for (int n = 0; n < levels; ++n) hm(m * levels + n, m * levels + n) = nu_a * (m + 0.5) + nu_b * (n + 0.5);
  const double ab = system.config.a[0] * system.config.b[0];
  return {hm + ab * mu, hm - ab * mu};
}

MatrixXc fock_thermal_state(const ThermalTruncation& thermal, int n_max) {
  const int levels = n_max + 1;
  MatrixXc rho = MatrixXc::Zero(Eigen::Index(levels) * levels, Eigen::Index(levels) * levels);
  for (const auto& s : thermal.states) {
    if (s.occupation.size() != 2) throw ValidationError("Fock state expects two modes");
    if (s.occupation[0] > n_max || s.occupation[1] > n_max)
      throw SizeError("thermal state exceeds the Fock cutoff");
    const Eigen::Index k = s.occupation[0] * levels + s.occupation[1];
    rho(k, k) = s.probability;
  }
  return rho;
}

}  // namespace hotgate
