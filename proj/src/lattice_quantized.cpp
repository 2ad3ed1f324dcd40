#include "hotgate/lattice_quantized.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hotgate/errors.hpp"
#include "hotgate/quadrature.hpp"

namespace hotgate {

LatticeConfig LatticeConfig::with_size(std::size_t n, double omega, double dx, double dy,
                                       CouplingLaw law) {
  LatticeConfig c;
  c.n_per_module = n;
  c.omega = omega;
  c.dx = dx;
  c.dy = dy;
  c.a = LogicalVector::ones(n);
  c.b = LogicalVector::ones(n);
  c.law = law;
  c.validate();
  return c;
}

void LatticeConfig::validate() const {
  if (n_per_module < 1) throw ValidationError("lattice needs N >= 1 particles per module");
  if (!(omega > 0.0) || !std::isfinite(omega)) throw ValidationError("omega must be > 0");
  if (!(dx > 0.0) || !(dy > 0.0)) throw ValidationError("lattice spacings must be > 0");
  if (a.size() != n_per_module || b.size() != n_per_module)
    throw ValidationError("logical vectors must have N entries");
  if (quadrature_order < 1) throw ValidationError("quadrature order must be >= 1");
  double dim = 1.0;
  for (std::size_t p = 0; p < 2 * n_per_module; ++p) dim *= kMechLevels;
  if (dim > double(dimension_cap)) {
    std::ostringstream os;
    os << "mechanical dimension 3^" << 2 * n_per_module << " exceeds the cap of " << dimension_cap;
    throw SizeError(os.str());
  }
}

std::size_t LatticeConfig::mechanical_dimension() const {
  std::size_t d = 1;
  for (std::size_t p = 0; p < 2 * n_per_module; ++p) d *= kMechLevels;
  return d;
}

SpatialVector LatticeConfig::site_a(std::size_t i) const { return {0.0, double(i + 1) * dy}; }
SpatialVector LatticeConfig::site_b(std::size_t j) const { return {dx, double(j + 1) * dy}; }

MechanicalState::MechanicalState(MatrixXc density, double tol) : density_(std::move(density)) {
  if (density_.rows() != density_.cols() || density_.rows() == 0)
    throw ValidationError("density matrix must be square and non-empty");
  if ((density_ - density_.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw ValidationError("density matrix is not Hermitian");
  if (std::abs(density_.trace() - cdouble(1.0)) > tol) throw ValidationError("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(density_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) throw ValidationError("density matrix is not positive");
}

MechanicalState MechanicalState::maximally_mixed(std::size_t dim) {
  MatrixXc rho = MatrixXc::Identity(Eigen::Index(dim), Eigen::Index(dim)) / double(dim);
  return MechanicalState(std::move(rho));
}

Eigen::MatrixXd pair_coupling_operator(const LatticeConfig& config, const SpatialVector& p1,
                                       const SpatialVector& p2, int order) {
  const int q = order > 0 ? order : config.quadrature_order;
  const QuadratureRule gh = gauss_hermite(q);
  const double scale = 1.0 / std::sqrt(config.omega);
  // per (t_x, t_y) node of one particle: weight and the three basis amplitudes
  const std::size_t nn = std::size_t(q) * std::size_t(q);
  std::vector<double> w2(nn), dx(nn), dy(nn);
  std::vector<std::array<double, 3>> amp(nn);
  for (int u = 0; u < q; ++u) {
    const auto px = hermite_polynomials(1, gh.nodes[std::size_t(u)]);
    for (int v = 0; v < q; ++v) {
      const auto py = hermite_polynomials(1, gh.nodes[std::size_t(v)]);
      const std::size_t k = std::size_t(u) * std::size_t(q) + std::size_t(v);
      w2[k] = gh.weights[std::size_t(u)] * gh.weights[std::size_t(v)];
      dx[k] = scale * gh.nodes[std::size_t(u)];
      dy[k] = scale * gh.nodes[std::size_t(v)];
      for (int l = 0; l < kMechLevels; ++l) amp[k][std::size_t(l)] = px[std::size_t(kLevelX[std::size_t(l)])] * py[std::size_t(kLevelY[std::size_t(l)])];
    }
  }
  const double ox = p1[0] - p2[0];
  const double oy = p1[1] - p2[1];
  Eigen::Matrix<double, 9, 9> m = Eigen::Matrix<double, 9, 9>::Zero();
  for (std::size_t k1 = 0; k1 < nn; ++k1)
    for (std::size_t k2 = 0; k2 < nn; ++k2) {
      const double rx = ox + dx[k1] - dx[k2];
      const double ry = oy + dy[k1] - dy[k2];
      const double r2 = rx * rx + ry * ry;
      if (r2 < 1e-18) throw DomainError("quadrature node brings two lattice particles together");
      const double g = w2[k1] * w2[k2] * config.law.at_squared_distance(r2);
      Eigen::Matrix<double, 9, 1> vec;
      for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) vec(x * 3 + y) = amp[k1][std::size_t(x)] * amp[k2][std::size_t(y)];
      m.noalias() += g * vec * vec.transpose();
    }
  return m;
}

Eigen::MatrixXd coupling_operator(const LatticeConfig& config, std::size_t i, std::size_t j, int order) {
  config.validate();
  if (i >= config.n_per_module || j >= config.n_per_module)
    throw ValidationError("particle index outside the module");
  return pair_coupling_operator(config, config.site_a(i), config.site_b(j), order);
}

namespace {

// Adds coef * op acting on particles p1 < p2 of a 2N-particle register.
void embed_pair(Eigen::MatrixXd& h, const Eigen::MatrixXd& op, std::size_t p1, std::size_t p2,
                std::size_t particles, double coef) {
  std::size_t w1 = 1, w2 = 1;
  for (std::size_t p = particles - 1; p > p1; --p) w1 *= kMechLevels;
  for (std::size_t p = particles - 1; p > p2; --p) w2 *= kMechLevels;
  const std::size_t dim = std::size_t(h.rows());
  for (std::size_t row = 0; row < dim; ++row) {
    const std::size_t d1 = (row / w1) % kMechLevels;
    const std::size_t d2 = (row / w2) % kMechLevels;
    const std::size_t rest = row - d1 * w1 - d2 * w2;
    for (std::size_t e1 = 0; e1 < kMechLevels; ++e1)
      for (std::size_t e2 = 0; e2 < kMechLevels; ++e2)
        h(Eigen::Index(row), Eigen::Index(rest + e1 * w1 + e2 * w2)) +=
            coef * op(Eigen::Index(d1 * 3 + d2), Eigen::Index(e1 * 3 + e2));
  }
}

}  // namespace

LatticeHamiltonian build_hamiltonian(const LatticeConfig& config) {
  config.validate();
  const std::size_t n = config.n_per_module;
  const std::size_t particles = 2 * n;
  const std::size_t dim = config.mechanical_dimension();
  LatticeHamiltonian out;
  out.mechanical_energies.resize(Eigen::Index(dim));
  for (std::size_t s = 0; s < dim; ++s) {
    double e = 0.0;
    std::size_t rem = s;
    for (std::size_t p = 0; p < particles; ++p) {
      const std::size_t l = rem % kMechLevels;
      rem /= kMechLevels;
      e += config.omega * double(kLevelX[l] + kLevelY[l] + 1);
    }
    out.mechanical_energies(Eigen::Index(s)) = e;
  }
  const Eigen::MatrixXd hm = out.mechanical_energies.asDiagonal();
  Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(Eigen::Index(dim), Eigen::Index(dim));
  Eigen::MatrixXd self = cross;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (config.a[i] * config.b[j] != 0.0)
        embed_pair(cross, coupling_operator(config, i, j), i, n + j, particles, config.a[i] * config.b[j]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 1; k < n; ++k) {
      if (config.a[i] * config.a[k] != 0.0)
        embed_pair(self, pair_coupling_operator(config, config.site_a(i), config.site_a(k)), i, k,
                   particles, config.a[i] * config.a[k]);
      if (config.b[i] * config.b[k] != 0.0)
        embed_pair(self, pair_coupling_operator(config, config.site_b(i), config.site_b(k)), n + i,
                   n + k, particles, config.b[i] * config.b[k]);
    }
  for (int s = 0; s < 4; ++s) out.blocks[std::size_t(s)] = hm + self + double(zz_parity(s)) * cross;
  return out;
}

BlockPropagator::BlockPropagator(const Eigen::MatrixXd& h) {
  if (h.rows() != h.cols()) throw ValidationError("block Hamiltonian must be square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) throw NumericError("block eigendecomposition failed");
  energies_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
}

MatrixXc BlockPropagator::propagator(double t) const {
  Eigen::VectorXcd phase(energies_.size());
  for (Eigen::Index k = 0; k < energies_.size(); ++k) phase(k) = std::polar(1.0, -energies_(k) * t);
  const MatrixXc v = vectors_.cast<cdouble>();
  return v * phase.asDiagonal() * v.adjoint();
}

MatrixXc BlockPropagator::evolve(const MatrixXc& rho, double t) const {
  const MatrixXc u = propagator(t);
  return u * rho * u.adjoint();
}

BlockChannelEvolver::BlockChannelEvolver(const Eigen::MatrixXd& h_plus, const Eigen::MatrixXd& h_minus,
                                         const MatrixXc& rho)
    : plus_(h_plus), minus_(h_minus) {
  if (h_plus.rows() != rho.rows() || h_minus.rows() != rho.rows())
    throw ValidationError("block and state dimensions differ");
  const BlockPropagator* blocks[2] = {&plus_, &minus_};
  for (int s = 0; s < 2; ++s)
    for (int s2 = 0; s2 < 2; ++s2) {
      const MatrixXc v1 = blocks[s]->vectors().cast<cdouble>();
      const MatrixXc v2 = blocks[s2]->vectors().cast<cdouble>();
      const MatrixXc a = v1.adjoint() * rho * v2;
      const MatrixXc b = v2.adjoint() * v1;
      // c(t) = sum_jk e^{-i l_j t} A_jk B_kj e^{i l'_k t}; keep the Hadamard product A o B^T
      a_[std::size_t(s * 2 + s2)] = a.cwiseProduct(b.transpose());
    }
}

cdouble BlockChannelEvolver::coherence(int sigma, int sigma2, double t) const {
  const BlockPropagator& p1 = block(sigma);
  const BlockPropagator& p2 = block(sigma2);
  const MatrixXc& c = a_[std::size_t((sigma > 0 ? 0 : 2) + (sigma2 > 0 ? 0 : 1))];
  Eigen::VectorXcd e1(p1.energies().size()), e2(p2.energies().size());
  for (Eigen::Index k = 0; k < e1.size(); ++k) e1(k) = std::polar(1.0, -p1.energies()(k) * t);
  for (Eigen::Index k = 0; k < e2.size(); ++k) e2(k) = std::polar(1.0, p2.energies()(k) * t);
  return e1.transpose() * c * e2;
}

TwoQubitChannel BlockChannelEvolver::channel(double t) const {
  Matrix16c choi = Matrix16c::Zero();
  for (int s = 0; s < 4; ++s)
    for (int s2 = 0; s2 < 4; ++s2) choi(s * 4 + s, s2 * 4 + s2) = coherence(zz_parity(s), zz_parity(s2), t);
  return TwoQubitChannel::from_choi(choi);
}

TwoQubitChannel evolve_channel(const LatticeConfig& config, const MechanicalState& rho_m, GateTime t) {
  if (rho_m.dimension() != config.mechanical_dimension())
    throw ValidationError("mechanical state dimension does not match the lattice");
  const LatticeHamiltonian h = build_hamiltonian(config);
  const BlockChannelEvolver ev(h.blocks[0], h.blocks[1], rho_m.density());
  return ev.channel(t);
}

double lattice_fidelity(const LatticeConfig& config, const MechanicalState& rho_m, GateTime t) {
  return choi_fidelity(evolve_channel(config, rho_m, t), std::numbers::pi / 4.0);
}

}  // namespace hotgate
