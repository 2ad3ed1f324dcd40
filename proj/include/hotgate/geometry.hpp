#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace hotgate {

/// Two positions closer than this are treated as coincident.
inline constexpr double kCoincidenceTolerance = 1e-12;

/// A position in 1, 2 or 3 dimensions (dimensionless lengths).
class SpatialVector {
 public:
  SpatialVector() = default;
  SpatialVector(std::initializer_list<double> coords);
  explicit SpatialVector(std::span<const double> coords);

  std::size_t dim() const noexcept { return dim_; }
  double operator[](std::size_t i) const noexcept { return coords_[i]; }
  double& operator[](std::size_t i) noexcept { return coords_[i]; }

  SpatialVector operator+(const SpatialVector& o) const;
  SpatialVector operator-(const SpatialVector& o) const;
  bool operator==(const SpatialVector& o) const = default;

  double squared_norm() const noexcept {
    return coords_[0] * coords_[0] + coords_[1] * coords_[1] + coords_[2] * coords_[2];
  }

 private:
  std::array<double, 3> coords_{};
  std::size_t dim_ = 0;
};

double squared_distance(const SpatialVector& r, const SpatialVector& q);

/// mu(r, q) = J |r - q|^(-gamma)
struct CouplingLaw {
  double J = 1.0;
  int gamma = 1;

  CouplingLaw() = default;
  CouplingLaw(double J, int gamma);

  /// Coupling at squared distance r2; no coincidence check.
  double at_squared_distance(double r2) const noexcept;
};

/// Fixed reference positions of one module's physical qubits.
class ModuleLayout {
 public:
  ModuleLayout() = default;
  explicit ModuleLayout(std::vector<SpatialVector> positions);

  std::size_t size() const noexcept { return positions_.size(); }
  std::size_t dim() const noexcept { return positions_.empty() ? 0 : positions_.front().dim(); }
  const SpatialVector& operator[](std::size_t i) const { return positions_[i]; }
  const std::vector<SpatialVector>& positions() const noexcept { return positions_; }

  ModuleLayout translated(const SpatialVector& shift) const;

 private:
  std::vector<SpatialVector> positions_;
};

/// Weights in [-1, 1] defining the repetition-encoded logical subspace.
class LogicalVector {
 public:
  LogicalVector() = default;
  LogicalVector(std::initializer_list<double> entries);
  explicit LogicalVector(std::vector<double> entries);

  static LogicalVector ones(std::size_t n) { return LogicalVector(std::vector<double>(n, 1.0)); }
  static LogicalVector zeros(std::size_t n) { return LogicalVector(std::vector<double>(n, 0.0)); }

  std::size_t size() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<double>& entries() const noexcept { return entries_; }

  LogicalVector scaled(double c) const;

 private:
  std::vector<double> entries_;
};

struct ModulePair {
  ModuleLayout module_a;
  ModuleLayout module_b;
  LogicalVector a;
  LogicalVector b;
  CouplingLaw law;

  ModulePair(ModuleLayout module_a, ModuleLayout module_b, LogicalVector a, LogicalVector b,
             CouplingLaw law);
};

/// J |r - q|^(-gamma). Throws DomainError for coincident positions.
double pairwise_coupling(const CouplingLaw& law, const SpatialVector& r, const SpatialVector& q);

/// Logical coupling strength sum_ij a_i b_j mu(r_i, q_j) at the given positions.
double logical_coupling(const ModulePair& pair, std::span<const SpatialVector> pos_a,
                        std::span<const SpatialVector> pos_b);

/// Logical coupling strength at the modules' reference positions.
double logical_coupling(const ModulePair& pair);

/// Intra-module term f(v) = sum_{i<j} v_i v_j mu(r_i, r_j).
double self_phase(const ModuleLayout& module, const LogicalVector& v, const CouplingLaw& law);

}  // namespace hotgate
