#include "hotgate/channel_fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hotgate/errors.hpp"

namespace hotgate {

GateTime::GateTime(double dt) : delta_t(dt) {
  if (!std::isfinite(dt) || dt < 0.0) throw ValidationError("gate time must be finite and >= 0");
}

TwoQubitChannel TwoQubitChannel::from_choi(const Matrix16c& choi, double tol) {
  TwoQubitChannel ch(choi);
  ch.validate(tol);
  return ch;
}

TwoQubitChannel TwoQubitChannel::from_unitary(const Matrix4c& u) {
  const Matrix4c k[1] = {u};
  return from_kraus(k);
}

TwoQubitChannel TwoQubitChannel::from_kraus(std::span<const Matrix4c> kraus, double tol) {
  Matrix16c choi = Matrix16c::Zero();
  for (const auto& k : kraus) {
    Eigen::Matrix<cdouble, 16, 1> v;
    for (int in = 0; in < 4; ++in)
      for (int out = 0; out < 4; ++out) v(in * 4 + out) = k(out, in);
    choi += v * v.adjoint();
  }
  return from_choi(choi, tol);
}

TwoQubitChannel TwoQubitChannel::zz_rotation(double angle) {
  const double a[1] = {angle};
  const double w[1] = {1.0};
  return zz_mixture(a, w);
}

TwoQubitChannel TwoQubitChannel::zz_mixture(std::span<const double> angles,
                                            std::span<const double> weights) {
  if (angles.size() != weights.size() || angles.empty())
    throw ValidationError("angles and weights must be non-empty and of equal length");
  Matrix16c choi = Matrix16c::Zero();
  for (int s = 0; s < 4; ++s)
    for (int t = 0; t < 4; ++t) {
      cdouble acc = 0.0;
      const double dz = zz_parity(s) - zz_parity(t);
      for (std::size_t k = 0; k < angles.size(); ++k) acc += weights[k] * std::polar(1.0, -angles[k] * dz);
      choi(s * 4 + s, t * 4 + t) = acc;
    }
  return from_choi(choi);
}

Matrix4c TwoQubitChannel::apply(const Matrix4c& rho) const {
  Matrix4c out = Matrix4c::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out += rho(i, j) * choi_.block<4, 4>(i * 4, j * 4);
  return out;
}

void TwoQubitChannel::validate(double tol) const {
  if ((choi_ - choi_.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw ValidationError("Choi matrix is not Hermitian");
  const double tr = choi_.trace().real();
  if (std::abs(tr - 4.0) > tol || std::abs(choi_.trace().imag()) > tol) {
    std::ostringstream os;
    os << "Choi matrix trace is " << tr << ", expected 4";
    throw ValidationError(os.str());
  }
  const double lmin = min_eigenvalue();
  if (lmin < -tol) {
    std::ostringstream os;
    os << "channel is not completely positive (Choi eigenvalue " << lmin << ")";
    throw ValidationError(os.str());
  }
}

double TwoQubitChannel::trace_preservation_error() const {
  double err = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const cdouble tr = choi_.block<4, 4>(i * 4, j * 4).trace();
      err = std::max(err, std::abs(tr - (i == j ? 1.0 : 0.0)));
    }
  return err;
}

double TwoQubitChannel::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix16c> es(choi_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Matrix4c zz_unitary(double angle) {
  Matrix4c u = Matrix4c::Zero();
  for (int s = 0; s < 4; ++s) u(s, s) = std::polar(1.0, -angle * zz_parity(s));
  return u;
}

double zz_damping_fidelity(const CouplingDistribution& dist, GateTime t, Exec exec) {
  if (dist.nodes.empty()) throw ValidationError("empty coupling distribution");
  if (std::abs(dist.total_weight() - 1.0) > 1e-10)
    throw ValidationError("coupling distribution weights must sum to 1");
  const double dt = t;
  const double s = blocked_sum(dist.nodes.size(), exec, [&](std::size_t k) {
    return dist.nodes[k].weight * std::sin(2.0 * dist.nodes[k].mu_bar * dt);
  });
  return std::clamp(0.5 + 0.5 * s, 0.0, 1.0);
}

double choi_fidelity(const TwoQubitChannel& channel, double target_angle) {
  channel.validate();
  const Matrix4c u = zz_unitary(target_angle);
  Eigen::Matrix<cdouble, 16, 1> omega;
  for (int in = 0; in < 4; ++in)
    for (int out = 0; out < 4; ++out) omega(in * 4 + out) = u(out, in);
  const cdouble f = omega.dot(channel.choi() * omega);  // dot conjugates the left operand
  return f.real() / 16.0;
}

double mediated_fidelity(const CouplingDistribution& dist1, const CouplingDistribution& dist2,
                         GateTime t) {
  return zz_damping_fidelity(dist1, t) * zz_damping_fidelity(dist2, t);
}

void EchoSpec::validate() const {
  if (!std::isfinite(tau) || !(tau > 0.0)) throw ValidationError("echo tau must be > 0");
  for (double h : fields)
    if (!std::isfinite(h)) throw ValidationError("echo field strengths must be finite");
}

namespace {

void check_qubits(const Eigen::MatrixXd& hzz, std::size_t fields, std::size_t K) {
  if (K < 1) throw ValidationError("need at least one qubit");
  if (K > kMaxEchoQubits) {
    std::ostringstream os;
    os << "dense propagators are limited to " << kMaxEchoQubits << " qubits, got " << K;
    throw SizeError(os.str());
  }
  if (std::size_t(hzz.rows()) != K || std::size_t(hzz.cols()) != K || fields != K)
    throw ValidationError("coupling table and field list must match the qubit count");
}

MatrixXc diagonal_propagator(const std::vector<double>& energies, double t) {
  MatrixXc u = MatrixXc::Zero(Eigen::Index(energies.size()), Eigen::Index(energies.size()));
  for (std::size_t s = 0; s < energies.size(); ++s) u(Eigen::Index(s), Eigen::Index(s)) = std::polar(1.0, -energies[s] * t);
  return u;
}

MatrixXc flip_matrix(std::size_t dim, std::size_t mask) {
  MatrixXc x = MatrixXc::Zero(Eigen::Index(dim), Eigen::Index(dim));
  for (std::size_t s = 0; s < dim; ++s) x(Eigen::Index(s ^ mask), Eigen::Index(s)) = 1.0;
  return x;
}

}  // namespace

std::vector<double> diagonal_energies(const Eigen::MatrixXd& hzz, std::span<const double> fields) {
  const std::size_t K = fields.size();
  std::vector<double> e(std::size_t(1) << K, 0.0);
  for (std::size_t s = 0; s < e.size(); ++s) {
    auto z = [&](std::size_t q) { return (s >> q) & 1U ? -1.0 : 1.0; };
    double v = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
      v += fields[i] * z(i);
      for (std::size_t j = i + 1; j < K; ++j) v += hzz(Eigen::Index(i), Eigen::Index(j)) * z(i) * z(j);
    }
    e[s] = v;
  }
  return e;
}

double echo_residual(const EchoSpec& spec, const Eigen::MatrixXd& hzz, std::size_t K) {
  spec.validate();
  check_qubits(hzz, spec.fields.size(), K);
  const std::vector<double> zero(K, 0.0);
  const auto e_full = diagonal_energies(hzz, spec.fields);
  const auto e_zz = diagonal_energies(hzz, zero);
  const std::size_t dim = e_full.size();
  const MatrixXc half = diagonal_propagator(e_full, spec.tau / 2.0);
  const MatrixXc flip = flip_matrix(dim, dim - 1);
  const MatrixXc echo = flip * half * flip * half;
  const MatrixXc diff = echo - diagonal_propagator(e_zz, spec.tau);
  Eigen::JacobiSVD<MatrixXc> svd(diff);
  return svd.singularValues()(0);
}

std::vector<FlipEvent> fractional_flip_schedule(const LogicalVector& v, double tau) {
  if (!std::isfinite(tau) || !(tau > 0.0)) throw ValidationError("schedule tau must be > 0");
  std::vector<FlipEvent> events;
  for (std::size_t i = 0; i < v.size(); ++i) {
    events.push_back({i, tau * (1.0 + v[i]) / 2.0});
    events.push_back({i, tau});
  }
  std::stable_sort(events.begin(), events.end(), [](const FlipEvent& x, const FlipEvent& y) {
    return x.time < y.time || (x.time == y.time && x.qubit < y.qubit);
  });
  return events;
}

MatrixXc schedule_propagator(std::span<const FlipEvent> schedule, const Eigen::MatrixXd& hzz,
                             std::span<const double> fields, double tau) {
  const std::size_t K = fields.size();
  check_qubits(hzz, K, K);
  const auto energies = diagonal_energies(hzz, fields);
  const std::size_t dim = energies.size();
  MatrixXc u = MatrixXc::Identity(Eigen::Index(dim), Eigen::Index(dim));
  double now = 0.0;
  for (const auto& ev : schedule) {
    if (ev.qubit >= K) throw ValidationError("flip targets a qubit outside the register");
    if (ev.time < now || ev.time > tau) throw ValidationError("flip times must be sorted within [0, tau]");
    u = diagonal_propagator(energies, ev.time - now) * u;
    u = flip_matrix(dim, std::size_t(1) << ev.qubit) * u;
    now = ev.time;
  }
  return diagonal_propagator(energies, tau - now) * u;
}

}  // namespace hotgate
