#pragma once

// Minimum-distance estimation of a bivariate Pickands dependence function from
// pseudo-observations, and the deterministic targets used to assess it.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "blockmax/block_empirics.hpp"
#include "blockmax/numerics.hpp"

namespace blockmax {

/// {j / intervals : j = 0..intervals}; the default is the 21-point grid j/20.
std::vector<double> default_t_grid(std::size_t intervals = 20);

struct EstimatorConfig {
  double kappa = 0.5;
  double gamma = 2.0 / 3.0;
  Divisor divisor = Divisor::K;
  std::vector<double> t_grid = default_t_grid();

  /// kappa > 0 and gamma in (1/2, lambda/2) with lambda = kappa + 1 - 1e-9; the
  /// grid must be sorted, lie in [0, 1] and contain both end points.
  void validate() const;
};

struct PickandsEstimate {
  std::vector<double> t;
  std::vector<double> raw;
  std::vector<double> corrected;
  EstimatorConfig config;
};

/// p_kappa(y) = (kappa+1)^2 y^kappa |log y| on (0, 1).
double weight_pk(double y, double kappa);

/// Estimator at t, computed by exact piecewise integration.
///
/// Along y -> (y^{1-t}, y^t) the empirical copula is a right-continuous step
/// function jumping at z_i = max(U_i1^{1/(1-t)}, U_i2^{1/t}); on each piece the
/// integral of y^kappa is closed-form, giving
///   (kappa+1) sum_pieces |log max(k^-gamma, c)| (hi^{kappa+1} - lo^{kappa+1}).
/// gamma is the truncation exponent; any gamma > 0 is accepted here.
double md_estimate_exact(const PseudoObs& pseudo, double t, double kappa, double gamma);

using CopulaEvaluator = std::function<double(std::span<const double>)>;
using WeightFn = std::function<double(double)>;

/// int_0^1 log max(k^-gamma, C(y^t)) p(y) / log(y) dy by adaptive quadrature, for
/// a simplex point t of any dimension. Without k there is no truncation, which is
/// the plug-in form that returns A(t) when C is an extreme-value copula.
double md_estimate_quadrature(const CopulaEvaluator& copula, std::span<const double> t,
                              const WeightFn& weight, double gamma, std::optional<std::size_t> k,
                              const numerics::QuadratureOptions& opts = {});

/// Raw and boundary-corrected estimates on config.t_grid.
PickandsEstimate estimate_pickands(const PseudoObs& pseudo, const EstimatorConfig& config);

/// A(t) - (1-t){A(0) - 1} - t{A(1) - 1}.
double boundary_correct(double a_t, double t, double a_at_0, double a_at_1);

/// Fills estimate.corrected from estimate.raw. The grid must contain 0 and 1.
PickandsEstimate boundary_correct(PickandsEstimate estimate);

/// Limit of the estimator without blocking (m = 1):
///   (kappa+1)^2 int_0^1 y^kappa |log C_1(y^{1-t}, y^t)| dy.
double a1_star(const std::function<double(double, double)>& c1, double t, double kappa,
               double tol = 1e-10);

/// L2 distance on [0, 1] by adaptive quadrature.
double l2_distance(const std::function<double(double)>& f, const std::function<double(double)>& g,
                   double tol = 1e-10);

/// Root-mean-square difference over the points of a grid.
double grid_l2_distance(std::span<const double> grid, const std::function<double(double)>& f,
                        const std::function<double(double)>& g);

struct ShapeReport {
  std::vector<std::size_t> below_lower;   // A(t) < max(t, 1-t) - tol
  std::vector<std::size_t> above_upper;   // A(t) > 1 + tol
  std::vector<std::size_t> nonconvex;     // interior points with negative second difference
  bool ok() const { return below_lower.empty() && above_upper.empty() && nonconvex.empty(); }
};

/// Diagnostic only: raw estimates are allowed to violate the constraints.
ShapeReport shape_check(std::span<const double> t, std::span<const double> a,
                        double bound_tol = 1e-12, double convexity_tol = 1e-8);

/// Columns t, A_raw, A_abc after "# key=value" comment lines echoing the config.
void write_estimate_csv(std::ostream& os, const PickandsEstimate& estimate, std::size_t m,
                        std::size_t k);

}  // namespace blockmax
