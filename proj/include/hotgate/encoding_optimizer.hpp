#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "hotgate/classical_noise.hpp"
#include "hotgate/geometry.hpp"
#include "hotgate/parallel.hpp"

namespace hotgate {

/// Gate fidelity as a function of the encodings and the interaction time.
class FidelityModel {
 public:
  virtual ~FidelityModel() = default;
  virtual std::size_t size_a() const = 0;
  virtual std::size_t size_b() const = 0;
  virtual double fidelity(std::span<const double> a, std::span<const double> b, double dt) const = 0;
  /// True when F depends on (a, b) only through the products a_i b_j.
  virtual bool bilinear() const { return true; }
};

class TableFidelityModel final : public FidelityModel {
 public:
  explicit TableFidelityModel(CouplingTable table, Exec exec = Exec::serial)
      : table_(std::move(table)), exec_(exec) {}
  std::size_t size_a() const override { return table_.n_a; }
  std::size_t size_b() const override { return table_.n_b; }
  double fidelity(std::span<const double> a, std::span<const double> b, double dt) const override {
    return table_.fidelity(a, b, dt, exec_);
  }
  const CouplingTable& table() const noexcept { return table_; }

 private:
  CouplingTable table_;
  Exec exec_;
};

class IndependentFidelityModel final : public FidelityModel {
 public:
  explicit IndependentFidelityModel(IndependentTable table, Exec exec = Exec::serial)
      : table_(std::move(table)), exec_(exec) {}
  std::size_t size_a() const override { return table_.n_a; }
  std::size_t size_b() const override { return table_.n_b; }
  double fidelity(std::span<const double> a, std::span<const double> b, double dt) const override {
    return table_.fidelity(a, b, dt, exec_);
  }

 private:
  IndependentTable table_;
  Exec exec_;
};

struct OptimizationConfig {
  std::vector<double> dt_grid;
  int restarts = 4;
  double tolerance = 1e-9;
  int max_iters = 0;  // 0 means 5000 * dimension
  bool warm_start = true;
  std::uint64_t seed = 0;

  void validate() const;
};

struct OptimizationResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
};

/// Sizes of the blocks of x that are reflected for the mirrored restart.
using BlockSizes = std::vector<std::size_t>;

/// Maximizes objective over the box [-1, 1]^n with a clamped Nelder-Mead simplex.
///
/// Restart order: init, all-ones, init with every block reversed, then seeded random
/// points. The init run wins ties; among later restarts equal values prefer the larger
/// L1 norm. Throws OptimizationError on a non-finite objective value.
OptimizationResult optimize_at(const std::function<double(std::span<const double>)>& objective,
                               std::span<const double> init, const OptimizationConfig& config,
                               const BlockSizes& blocks = {}, std::uint64_t stream = 0);

struct CurvePoint {
  double delta_t = 0.0;
  double fidelity = 0.0;
  double trivial_fidelity = 0.0;
  LogicalVector a;
  LogicalVector b;
};

struct InfidelityCurve {
  std::vector<CurvePoint> points;
};

/// Optimal fidelity over the grid; warm-started from the previous grid point when
/// config.warm_start is set, otherwise grid points run independently (and in parallel).
InfidelityCurve infidelity_curve(const FidelityModel& model, const OptimizationConfig& config);

/// (c a, b) for c in (0, 1].
std::pair<LogicalVector, LogicalVector> scale_encoding(const LogicalVector& a, const LogicalVector& b,
                                                       double c);

/// Representative of the gauge orbit (s a, b / s), (-a, -b): max|a| = max|b| and the
/// largest-magnitude entry of a positive. Leaves every product a_i b_j unchanged.
void canonical_gauge(std::vector<double>& a, std::vector<double>& b);

/// n log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

}  // namespace hotgate
