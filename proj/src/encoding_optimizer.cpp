#include "hotgate/encoding_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hotgate/errors.hpp"
#include "hotgate/rng.hpp"

namespace hotgate {

void OptimizationConfig::validate() const {
  if (restarts < 1) throw ValidationError("restarts must be >= 1");
  if (!(tolerance > 0.0)) throw ValidationError("tolerance must be > 0");
  if (max_iters < 0) throw ValidationError("max_iters must be >= 0");
  for (std::size_t k = 0; k < dt_grid.size(); ++k) {
    if (!std::isfinite(dt_grid[k]) || dt_grid[k] < 0.0)
      throw ValidationError("grid values must be finite and >= 0");
    if (k > 0 && !(dt_grid[k] > dt_grid[k - 1]))
      throw ValidationError("grid must be strictly ascending");
  }
}

namespace {

using Point = std::vector<double>;

class Objective {
 public:
  explicit Objective(const std::function<double(std::span<const double>)>& f) : f_(f) {}
  double operator()(const Point& x) {
    ++count;
    const double v = f_(x);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "objective returned a non-finite value after " << count << " evaluations";
      throw OptimizationError(os.str());
    }
    return v;
  }
  int count = 0;

 private:
  const std::function<double(std::span<const double>)>& f_;
};

void clamp_box(Point& x) {
  for (double& v : x) v = std::clamp(v, -1.0, 1.0);
}

Point affine(const Point& c, const Point& x, double t) {
  // c + t (x - c), clamped to the box
  Point y(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) y[k] = c[k] + t * (x[k] - c[k]);
  clamp_box(y);
  return y;
}

// One Nelder-Mead descent maximizing f; returns the best vertex.
std::pair<Point, double> simplex_run(Objective& f, Point x0, double tol, int max_iters) {
  const std::size_t n = x0.size();
  clamp_box(x0);
  std::vector<Point> pts(n + 1, x0);
  for (std::size_t k = 0; k < n; ++k) pts[k + 1][k] += x0[k] + 0.25 <= 1.0 ? 0.25 : -0.25;
  std::vector<double> val(n + 1);
  for (std::size_t k = 0; k <= n; ++k) val[k] = f(pts[k]);
  std::vector<std::size_t> order(n + 1);
  for (int iter = 0;; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return val[i] > val[j]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
    if (val[best] - val[worst] < tol || iter >= max_iters) return {pts[best], val[best]};

    Point c(n, 0.0);
    for (std::size_t k = 0; k <= n; ++k)
      if (k != worst)
        for (std::size_t d = 0; d < n; ++d) c[d] += pts[k][d] / double(n);

    const Point xr = affine(c, pts[worst], -1.0);
    const double fr = f(xr);
    if (fr > val[best]) {
      const Point xe = affine(c, pts[worst], -2.0);
      const double fe = f(xe);
      if (fe > fr) {
        pts[worst] = xe;
        val[worst] = fe;
      } else {
        pts[worst] = xr;
        val[worst] = fr;
      }
      continue;
    }
    if (fr > val[second]) {
      pts[worst] = xr;
      val[worst] = fr;
      continue;
    }
    const bool outside = fr > val[worst];
    const Point xc = outside ? affine(c, xr, 0.5) : affine(c, pts[worst], 0.5);
    const double fc = f(xc);
    if (outside ? fc >= fr : fc > val[worst]) {
      pts[worst] = xc;
      val[worst] = fc;
      continue;
    }
    for (std::size_t k = 0; k <= n; ++k) {
      if (k == best) continue;
      pts[k] = affine(pts[best], pts[k], 0.5);
      val[k] = f(pts[k]);
    }
  }
}

std::pair<Point, double> local_search(Objective& f, const Point& start, double tol, int max_iters) {
  auto [x, v] = simplex_run(f, start, tol, max_iters);
  // a collapsed simplex can stall on a face of the box; rebuild it around the best point
  for (int rep = 0; rep < 3; ++rep) {
    auto [x2, v2] = simplex_run(f, x, tol, max_iters);
    if (!(v2 > v + tol)) {
      if (v2 > v) {
        x = x2;
        v = v2;
      }
      break;
    }
    x = std::move(x2);
    v = v2;
  }
  return {x, v};
}

double l1(const Point& x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

}  // namespace

OptimizationResult optimize_at(const std::function<double(std::span<const double>)>& objective,
                               std::span<const double> init, const OptimizationConfig& config,
                               const BlockSizes& blocks, std::uint64_t stream) {
  config.validate();
  const std::size_t n = init.size();
  if (n == 0) throw ValidationError("optimization needs at least one variable");
  BlockSizes parts = blocks.empty() ? BlockSizes{n} : blocks;
  if (std::accumulate(parts.begin(), parts.end(), std::size_t(0)) != n)
    throw ValidationError("block sizes do not add up to the variable count");
  const int max_iters = config.max_iters > 0 ? config.max_iters : int(5000 * n);

  Point x0(init.begin(), init.end());
  clamp_box(x0);
  std::vector<Point> starts{x0, Point(n, 1.0)};
  Point mirrored = x0;
  for (std::size_t off = 0, b = 0; b < parts.size(); off += parts[b], ++b)
    std::reverse(mirrored.begin() + long(off), mirrored.begin() + long(off + parts[b]));
  starts.push_back(mirrored);
  CounterRng rng(config.seed, stream);
  while (starts.size() < std::size_t(config.restarts)) {
    Point r(n);
    for (double& v : r) v = 2.0 * rng.uniform() - 1.0;
    starts.push_back(r);
  }
  starts.resize(std::size_t(config.restarts));

  Objective f(objective);
  OptimizationResult out;
  bool best_from_init = true;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    if (s > 0 && std::find(starts.begin(), starts.begin() + long(s), starts[s]) != starts.begin() + long(s))
      continue;
    auto [x, v] = local_search(f, starts[s], config.tolerance, max_iters);
    if (s == 0) {
      out.x = std::move(x);
      out.value = v;
      continue;
    }
    const bool better = v > out.value;
    const bool tie_wins = v == out.value && !best_from_init && l1(x) > l1(out.x);
    if (better || tie_wins) {
      out.x = std::move(x);
      out.value = v;
      best_from_init = false;
    }
  }
  out.evaluations = f.count;
  return out;
}

void canonical_gauge(std::vector<double>& a, std::vector<double>& b) {
  double ma = 0.0, mb = 0.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i]) > ma) {
      ma = std::abs(a[i]);
      arg = i;
    }
  for (double v : b) mb = std::max(mb, std::abs(v));
  if (ma == 0.0 || mb == 0.0) return;
  const double s = std::sqrt(mb / ma);
  const double sign = a[arg] < 0.0 ? -1.0 : 1.0;
  for (double& v : a) v = std::clamp(sign * s * v, -1.0, 1.0);
  for (double& v : b) v = std::clamp(sign * v / s, -1.0, 1.0);
}

std::pair<LogicalVector, LogicalVector> scale_encoding(const LogicalVector& a, const LogicalVector& b,
                                                       double c) {
  if (!(c > 0.0 && c <= 1.0)) throw ValidationError("scale factor must lie in (0, 1]");
  return {a.scaled(c), b};
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo) || n == 0) throw ValidationError("log grid needs 0 < lo <= hi, n >= 1");
  if (n == 1) return {lo};
  std::vector<double> g(n);
  const double step = std::log(hi / lo) / double(n - 1);
  for (std::size_t k = 0; k < n; ++k) g[k] = lo * std::exp(step * double(k));
  g.front() = lo;
  g.back() = hi;
  return g;
}

namespace {

CurvePoint solve_point(const FidelityModel& model, const OptimizationConfig& config, double dt,
                       const Point& init, std::uint64_t stream) {
  const std::size_t na = model.size_a(), nb = model.size_b();
  auto split_eval = [&](std::span<const double> x) {
    return model.fidelity(x.subspan(0, na), x.subspan(na, nb), dt);
  };
  const std::function<double(std::span<const double>)> obj = split_eval;
  const Point ones(na + nb, 1.0);
  CurvePoint p;
  p.delta_t = dt;
  p.trivial_fidelity = split_eval(ones);
  const OptimizationResult res = optimize_at(obj, init, config, {na, nb}, stream);
  std::vector<double> a(res.x.begin(), res.x.begin() + long(na));
  std::vector<double> b(res.x.begin() + long(na), res.x.end());
  if (model.bilinear()) canonical_gauge(a, b);
  double f = model.fidelity(a, b, dt);
  if (f < p.trivial_fidelity) {
    a.assign(na, 1.0);
    b.assign(nb, 1.0);
    f = p.trivial_fidelity;
  }
  p.fidelity = f;
  p.a = LogicalVector(std::move(a));
  p.b = LogicalVector(std::move(b));
  return p;
}

}  // namespace

InfidelityCurve infidelity_curve(const FidelityModel& model, const OptimizationConfig& config) {
  config.validate();
  if (config.dt_grid.empty()) throw ValidationError("grid must not be empty");
  const std::size_t na = model.size_a(), nb = model.size_b();
  InfidelityCurve curve;
  curve.points.resize(config.dt_grid.size());
  const Point ones(na + nb, 1.0);

  if (!config.warm_start) {
    for_each_index(config.dt_grid.size(), Exec::parallel, [&](std::size_t g) {
      curve.points[g] = solve_point(model, config, config.dt_grid[g], ones, g);
    });
    return curve;
  }

  for (std::size_t g = 0; g < config.dt_grid.size(); ++g) {
    const double dt = config.dt_grid[g];
    Point init = ones;
    if (g > 0) {
      // previous optimum, and the same encoding slowed down to keep its earlier fidelity
      const CurvePoint& prev = curve.points[g - 1];
      Point warm(prev.a.entries());
      warm.insert(warm.end(), prev.b.entries().begin(), prev.b.entries().end());
      Point scaled = warm;
      const double c = dt > 0.0 ? prev.delta_t / dt : 1.0;
      for (std::size_t i = 0; i < na; ++i) scaled[i] *= c;
      auto eval = [&](const Point& x) {
        return model.fidelity(std::span<const double>(x).subspan(0, na),
                              std::span<const double>(x).subspan(na, nb), dt);
      };
      init = eval(scaled) > eval(warm) ? scaled : warm;
    }
    curve.points[g] = solve_point(model, config, dt, init, g);
  }
  return curve;
}

}  // namespace hotgate
