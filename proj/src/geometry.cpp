#include "hotgate/geometry.hpp"

#include <sstream>

#include "hotgate/errors.hpp"

namespace hotgate {

namespace {

void check_coords(std::span<const double> coords) {
  if (coords.empty() || coords.size() > 3)
    throw ValidationError("spatial vectors must have 1, 2 or 3 coordinates");
  for (double c : coords)
    if (!std::isfinite(c)) throw ValidationError("spatial vector coordinate is not finite");
}

}  // namespace

SpatialVector::SpatialVector(std::initializer_list<double> coords)
    : SpatialVector(std::span<const double>(coords.begin(), coords.size())) {}

SpatialVector::SpatialVector(std::span<const double> coords) : dim_(coords.size()) {
  check_coords(coords);
  for (std::size_t i = 0; i < coords.size(); ++i) coords_[i] = coords[i];
}

SpatialVector SpatialVector::operator+(const SpatialVector& o) const {
  if (dim_ != o.dim_) throw ValidationError("spatial vector dimensions differ");
  SpatialVector r = *this;
  for (std::size_t i = 0; i < 3; ++i) r.coords_[i] += o.coords_[i];
  return r;
}

SpatialVector SpatialVector::operator-(const SpatialVector& o) const {
  if (dim_ != o.dim_) throw ValidationError("spatial vector dimensions differ");
  SpatialVector r = *this;
  for (std::size_t i = 0; i < 3; ++i) r.coords_[i] -= o.coords_[i];
  return r;
}

double squared_distance(const SpatialVector& r, const SpatialVector& q) {
  const double dx = r[0] - q[0];
  const double dy = r[1] - q[1];
  const double dz = r[2] - q[2];
  return dx * dx + dy * dy + dz * dz;
}

CouplingLaw::CouplingLaw(double J, int gamma) : J(J), gamma(gamma) {
  if (!std::isfinite(J) || J < 0.0) throw ValidationError("coupling constant J must be >= 0");
  if (gamma < 1) throw ValidationError("decay exponent gamma must be >= 1");
}

double CouplingLaw::at_squared_distance(double r2) const noexcept {
  // r^(-gamma) from integer powers of 1/r2, one sqrt for odd gamma
  const double inv = 1.0 / r2;
  double p = 1.0;
  for (int k = 0; k < gamma / 2; ++k) p *= inv;
  if (gamma % 2 == 1) p *= std::sqrt(inv);
  return J * p;
}

ModuleLayout::ModuleLayout(std::vector<SpatialVector> positions) : positions_(std::move(positions)) {
  if (positions_.empty()) throw ValidationError("a module needs at least one qubit");
  const std::size_t d = positions_.front().dim();
  for (const auto& p : positions_)
    if (p.dim() != d) throw ValidationError("module positions have mixed dimensions");
  for (std::size_t i = 0; i < positions_.size(); ++i)
    for (std::size_t j = i + 1; j < positions_.size(); ++j)
      if (std::sqrt(squared_distance(positions_[i], positions_[j])) <= kCoincidenceTolerance) {
        std::ostringstream os;
        os << "module qubits " << i << " and " << j << " coincide";
        throw DomainError(os.str());
      }
}

ModuleLayout ModuleLayout::translated(const SpatialVector& shift) const {
  std::vector<SpatialVector> moved;
  moved.reserve(positions_.size());
  for (const auto& p : positions_) moved.push_back(p + shift);
  return ModuleLayout(std::move(moved));
}

LogicalVector::LogicalVector(std::initializer_list<double> entries)
    : LogicalVector(std::vector<double>(entries)) {}

LogicalVector::LogicalVector(std::vector<double> entries) : entries_(std::move(entries)) {
  for (double e : entries_)
    if (!std::isfinite(e) || e < -1.0 || e > 1.0)
      throw ValidationError("logical vector entries must lie in [-1, 1]");
}

LogicalVector LogicalVector::scaled(double c) const {
  std::vector<double> out(entries_);
  for (double& e : out) e *= c;
  return LogicalVector(std::move(out));
}

ModulePair::ModulePair(ModuleLayout module_a, ModuleLayout module_b, LogicalVector a,
                       LogicalVector b, CouplingLaw law)
    : module_a(std::move(module_a)),
      module_b(std::move(module_b)),
      a(std::move(a)),
      b(std::move(b)),
      law(law) {
  if (this->a.size() != this->module_a.size())
    throw ValidationError("logical vector a does not match module A size");
  if (this->b.size() != this->module_b.size())
    throw ValidationError("logical vector b does not match module B size");
}

double pairwise_coupling(const CouplingLaw& law, const SpatialVector& r, const SpatialVector& q) {
  const double r2 = squared_distance(r, q);
  if (std::sqrt(r2) < kCoincidenceTolerance)
    throw DomainError("coincident positions make the coupling singular");
  return law.at_squared_distance(r2);
}

double logical_coupling(const ModulePair& pair, std::span<const SpatialVector> pos_a,
                        std::span<const SpatialVector> pos_b) {
  if (pos_a.size() != pair.a.size() || pos_b.size() != pair.b.size())
    throw ValidationError("position lists do not match the module sizes");
  double total = 0.0;
  for (std::size_t i = 0; i < pos_a.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < pos_b.size(); ++j)
      row += pair.b[j] * pairwise_coupling(pair.law, pos_a[i], pos_b[j]);
    total += pair.a[i] * row;
  }
  return total;
}

double logical_coupling(const ModulePair& pair) {
  return logical_coupling(pair, pair.module_a.positions(), pair.module_b.positions());
}

double self_phase(const ModuleLayout& module, const LogicalVector& v, const CouplingLaw& law) {
  if (v.size() != module.size()) throw ValidationError("logical vector does not match module size");
  double total = 0.0;
  for (std::size_t i = 0; i < module.size(); ++i)
    for (std::size_t j = i + 1; j < module.size(); ++j)
      total += v[i] * v[j] * pairwise_coupling(law, module[i], module[j]);
  return total;
}

}  // namespace hotgate
