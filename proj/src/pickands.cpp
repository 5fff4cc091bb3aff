#include "blockmax/pickands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "blockmax/csv.hpp"
#include "blockmax/errors.hpp"

namespace blockmax {
namespace {

// Point y^t on the curve for a simplex point t of length d - 1.
void curve_point(double y, std::span<const double> t, std::vector<double>& out) {
  double rest = 1.0;
  for (double tj : t) rest -= tj;
  out[0] = rest == 0.0 ? 1.0 : std::pow(y, rest);
  for (std::size_t j = 0; j < t.size(); ++j) out[j + 1] = t[j] == 0.0 ? 1.0 : std::pow(y, t[j]);
}

void check_simplex_point(std::span<const double> t) {
  double sum = 0.0;
  for (double tj : t) {
    if (!(tj >= 0.0 && tj <= 1.0)) throw DomainError("simplex coordinate outside [0, 1]");
    sum += tj;
  }
  if (sum > 1.0 + 1e-12) throw DomainError("simplex coordinates sum to more than 1");
}

std::size_t grid_index(const std::vector<double>& t, double value) {
  const auto it = std::find(t.begin(), t.end(), value);
  if (it == t.end())
    throw ConfigError("t grid must contain " + csv::format_number(value));
  return static_cast<std::size_t>(it - t.begin());
}

}  // namespace

std::vector<double> default_t_grid(std::size_t intervals) {
  if (intervals == 0) throw ConfigError("t grid needs at least one interval");
  std::vector<double> grid(intervals + 1);
  for (std::size_t j = 0; j <= intervals; ++j)
    grid[j] = static_cast<double>(j) / static_cast<double>(intervals);
  return grid;
}

void EstimatorConfig::validate() const {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ConfigError("kappa must be positive");
  const double lambda = kappa + 1.0 - 1e-9;
  if (!(gamma > 0.5 && gamma < lambda / 2.0))
    throw ConfigError("gamma=" + csv::format_number(gamma) + " outside (1/2, " +
                      csv::format_number(lambda / 2.0) + ") for kappa=" +
                      csv::format_number(kappa));
  if (t_grid.size() < 2) throw ConfigError("t grid needs at least two points");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0 && t_grid[i] <= 1.0)) throw ConfigError("t grid point outside [0, 1]");
    if (i && !(t_grid[i] > t_grid[i - 1])) throw ConfigError("t grid must be strictly increasing");
  }
  if (t_grid.front() != 0.0 || t_grid.back() != 1.0)
    throw ConfigError("t grid must contain 0 and 1");
}

double weight_pk(double y, double kappa) {
  if (!(y > 0.0 && y < 1.0)) throw DomainError("weight argument outside (0, 1)");
  return (kappa + 1.0) * (kappa + 1.0) * std::pow(y, kappa) * std::abs(std::log(y));
}

double md_estimate_exact(const PseudoObs& pseudo, double t, double kappa, double gamma) {
  if (pseudo.dim() != 2) throw DomainError("exact estimator is bivariate only");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("t outside [0, 1]");
  if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  const std::size_t k = pseudo.k();
  if (k == 0) throw DomainError("no pseudo-observations");

  // Coordinate with exponent e contributes U^{1/e}; exponent 0 means the
  // constraint U <= 1 always holds.
  const auto jump = [](double u, double e) { return e == 0.0 ? 0.0 : std::pow(u, 1.0 / e); };
  std::vector<double> z(k);
  for (std::size_t i = 0; i < k; ++i)
    z[i] = std::max(jump(pseudo.values(i, 0), 1.0 - t), jump(pseudo.values(i, 1), t));
  std::sort(z.begin(), z.end());

  const double kd = static_cast<double>(k);
  const double floor_log = -gamma * std::log(kd);  // log k^{-gamma}
  const double p = kappa + 1.0;
  double sum = 0.0;
  double lo = 0.0;
  for (std::size_t j = 0; j <= k; ++j) {
    const double hi = j < k ? std::min(z[j], 1.0) : 1.0;
    if (hi > lo) {
      const double log_c = j == 0 ? floor_log : std::max(floor_log, std::log(static_cast<double>(j) / kd));
      sum += -log_c * (std::pow(hi, p) - std::pow(lo, p));
      lo = hi;
    }
  }
  return p * sum;
}

double md_estimate_quadrature(const CopulaEvaluator& copula, std::span<const double> t,
                              const WeightFn& weight, double gamma, std::optional<std::size_t> k,
                              const numerics::QuadratureOptions& opts) {
  check_simplex_point(t);
  if (k && *k == 0) throw DomainError("k must be positive");
  const double floor_c = k ? std::pow(static_cast<double>(*k), -gamma) : 0.0;
  std::vector<double> u(t.size() + 1);
  auto integrand = [&](double y) {
    if (!(y > 0.0 && y < 1.0)) return 0.0;
    curve_point(y, t, u);
    const double c = std::max(floor_c, copula(u));
    return std::log(c) * weight(y) / std::log(y);
  };
  try {
    return numerics::integrate(integrand, 0.0, 1.0, opts).value;
  } catch (const NumericError& e) {
    throw NumericError(std::string("estimator quadrature: ") + e.what());
  }
}

PickandsEstimate estimate_pickands(const PseudoObs& pseudo, const EstimatorConfig& config) {
  config.validate();
  PickandsEstimate est;
  est.t = config.t_grid;
  est.config = config;
  est.raw.reserve(est.t.size());
  for (double t : est.t) {
    const double a = md_estimate_exact(pseudo, t, config.kappa, config.gamma);
    if (!std::isfinite(a) || !(a > 0.0))
      throw NumericError("non-positive raw estimate at t=" + csv::format_number(t));
    est.raw.push_back(a);
  }
  return boundary_correct(std::move(est));
}

double boundary_correct(double a_t, double t, double a_at_0, double a_at_1) {
  return a_t - (1.0 - t) * (a_at_0 - 1.0) - t * (a_at_1 - 1.0);
}

PickandsEstimate boundary_correct(PickandsEstimate estimate) {
  if (estimate.raw.size() != estimate.t.size()) throw DomainError("grid and estimates differ in size");
  const std::size_t i0 = grid_index(estimate.t, 0.0);
  const std::size_t i1 = grid_index(estimate.t, 1.0);
  const double a0 = estimate.raw[i0];
  const double a1 = estimate.raw[i1];
  estimate.corrected.resize(estimate.t.size());
  for (std::size_t i = 0; i < estimate.t.size(); ++i)
    estimate.corrected[i] = boundary_correct(estimate.raw[i], estimate.t[i], a0, a1);
  // Exact pinning; the formula can be off by an ulp at the end points.
  estimate.corrected[i0] = 1.0;
  estimate.corrected[i1] = 1.0;
  return estimate;
}

double a1_star(const std::function<double(double, double)>& c1, double t, double kappa, double tol) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("t outside [0, 1]");
  if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
  auto integrand = [&](double y) {
    if (!(y > 0.0 && y < 1.0)) return 0.0;
    const double u = t == 1.0 ? 1.0 : std::pow(y, 1.0 - t);
    const double v = t == 0.0 ? 1.0 : std::pow(y, t);
    return std::pow(y, kappa) * std::abs(std::log(c1(u, v)));
  };
  numerics::QuadratureOptions opts;
  opts.abs_tol = tol;
  return (kappa + 1.0) * (kappa + 1.0) * numerics::integrate(integrand, 0.0, 1.0, opts).value;
}

double l2_distance(const std::function<double(double)>& f, const std::function<double(double)>& g,
                   double tol) {
  numerics::QuadratureOptions opts;
  opts.abs_tol = tol;
  auto sq = [&](double t) {
    const double d = f(t) - g(t);
    return d * d;
  };
  return std::sqrt(numerics::integrate(sq, 0.0, 1.0, opts).value);
}

double grid_l2_distance(std::span<const double> grid, const std::function<double(double)>& f,
                        const std::function<double(double)>& g) {
  if (grid.empty()) throw DomainError("empty grid");
  double sum = 0.0;
  for (double t : grid) {
    const double d = f(t) - g(t);
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(grid.size()));
}

ShapeReport shape_check(std::span<const double> t, std::span<const double> a, double bound_tol,
                        double convexity_tol) {
  if (t.size() != a.size()) throw DomainError("grid and values differ in size");
  if (t.size() < 3) throw DomainError("shape check needs at least three grid points");
  ShapeReport report;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (a[i] < std::max(t[i], 1.0 - t[i]) - bound_tol) report.below_lower.push_back(i);
    if (a[i] > 1.0 + bound_tol) report.above_upper.push_back(i);
  }
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    const double left = (a[i] - a[i - 1]) / (t[i] - t[i - 1]);
    const double right = (a[i + 1] - a[i]) / (t[i + 1] - t[i]);
    if (right - left < -convexity_tol) report.nonconvex.push_back(i);
  }
  return report;
}

void write_estimate_csv(std::ostream& os, const PickandsEstimate& estimate, std::size_t m,
                        std::size_t k) {
  os << "# m=" << m << "\n# k=" << k << "\n# kappa=" << csv::format_number(estimate.config.kappa)
     << "\n# gamma=" << csv::format_number(estimate.config.gamma)
     << "\n# divisor=" << (estimate.config.divisor == Divisor::K ? "k" : "k+1") << '\n';
  os << "t,A_raw,A_abc\n";
  for (std::size_t i = 0; i < estimate.t.size(); ++i) {
    os << csv::format_number(estimate.t[i]) << ',' << csv::format_number(estimate.raw[i]) << ','
       << csv::format_number(estimate.corrected.empty() ? estimate.raw[i] : estimate.corrected[i])
       << '\n';
  }
  if (!os) throw IoError("write failed");
}

}  // namespace blockmax
