#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "hotgate/classical_noise.hpp"
#include "hotgate/geometry.hpp"

namespace hotgate {

using cdouble = std::complex<double>;
using Matrix4c = Eigen::Matrix<cdouble, 4, 4>;
using Matrix16c = Eigen::Matrix<cdouble, 16, 16>;
using MatrixXc = Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic>;

/// Interaction time; finite and non-negative.
struct GateTime {
  double delta_t = 0.0;

  GateTime() = default;
  GateTime(double dt);  // NOLINT(google-explicit-constructor)
  operator double() const noexcept { return delta_t; }  // NOLINT
};

/// Two-qubit channel in Choi form.
///
/// Row/column index of the Choi matrix is in * 4 + out, i.e.
/// Choi = sum |in><in'| (x) E(|in><in'|). The identity channel has trace 4.
class TwoQubitChannel {
 public:
  static TwoQubitChannel from_choi(const Matrix16c& choi, double tol = 1e-10);
  static TwoQubitChannel from_unitary(const Matrix4c& u);
  static TwoQubitChannel from_kraus(std::span<const Matrix4c> kraus, double tol = 1e-10);
  /// rho -> U rho U^dagger with U = exp(-i angle ZZ).
  static TwoQubitChannel zz_rotation(double angle);
  /// Mixture of ZZ rotations, weights summing to 1.
  static TwoQubitChannel zz_mixture(std::span<const double> angles, std::span<const double> weights);

  const Matrix16c& choi() const noexcept { return choi_; }
  Matrix4c apply(const Matrix4c& rho) const;

  /// Throws ValidationError unless Hermitian, trace 4 and positive semidefinite within tol.
  void validate(double tol = 1e-10) const;
  /// max |Tr_out E(|in><in'|) - delta_{in,in'}|.
  double trace_preservation_error() const;
  double min_eigenvalue() const;

 private:
  explicit TwoQubitChannel(const Matrix16c& choi) : choi_(choi) {}
  Matrix16c choi_;
};

/// Eigenvalue of Z (x) Z on logical basis state s = 2 i + j.
inline constexpr int zz_parity(int s) noexcept { return (s == 0 || s == 3) ? 1 : -1; }

/// exp(-i angle ZZ).
Matrix4c zz_unitary(double angle);

/// sum_k w_k cos^2(pi/4 - mu_k dt), evaluated as 1/2 + 1/2 sum_k w_k sin(2 mu_k dt).
double zz_damping_fidelity(const CouplingDistribution& dist, GateTime t, Exec exec = Exec::serial);

/// Overlap of the channel with exp(-i target_angle ZZ): <Omega_U|Choi|Omega_U> / 16 with
/// |Omega_U> = sum_in |in> (x) U|in>.
double choi_fidelity(const TwoQubitChannel& channel, double target_angle);

/// Fidelity of the measurement-based mediated gate: product of the two link fidelities.
double mediated_fidelity(const CouplingDistribution& dist1, const CouplingDistribution& dist2,
                         GateTime t);

struct EchoSpec {
  std::vector<double> fields;  // background Z strength per qubit
  double tau = 1.0;

  void validate() const;
};

/// Largest qubit count for dense echo and schedule propagators.
inline constexpr std::size_t kMaxEchoQubits = 6;

/// ||X^K exp(-i(Hzz+Hext)tau/2) X^K exp(-i(Hzz+Hext)tau/2) - exp(-i Hzz tau)||_2 with
/// Hzz = sum_{i<j} hzz(i,j) Z_i Z_j and Hext = sum_k h_k Z_k. Qubit k is bit k of the index.
double echo_residual(const EchoSpec& spec, const Eigen::MatrixXd& hzz, std::size_t K);

struct FlipEvent {
  std::size_t qubit = 0;
  double time = 0.0;
};

/// One X flip per qubit at tau (1 + v_i) / 2 and a frame-restoring flip at tau, so the
/// time-averaged sign of qubit i is v_i. Sorted by time, then qubit.
std::vector<FlipEvent> fractional_flip_schedule(const LogicalVector& v, double tau);

/// Exact propagator over [0, tau] of the diagonal Hamiltonian hzz/fields interleaved with
/// the scheduled flips.
MatrixXc schedule_propagator(std::span<const FlipEvent> schedule, const Eigen::MatrixXd& hzz,
                             std::span<const double> fields, double tau);

/// Diagonal of Hzz + Hext on the 2^K computational basis.
std::vector<double> diagonal_energies(const Eigen::MatrixXd& hzz, std::span<const double> fields);

}  // namespace hotgate
