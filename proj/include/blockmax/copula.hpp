#pragma once

// Parametric copula families: distribution functions, samplers, Pickands
// dependence functions and tail-dependence parameterisations.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "blockmax/matrix.hpp"
#include "blockmax/rng.hpp"

namespace blockmax {

enum class CopulaFamily { OuterPowerClayton, GumbelHougaard, TCopula, Independence, PickandsForm };

std::string to_string(CopulaFamily family);
/// Accepts "opc", "gumbel", "t", "independence" (case-sensitive). Throws ConfigError.
CopulaFamily parse_family(const std::string& name);

/// A Pickands dependence function on the unit simplex of dimension d - 1.
///
/// For d = 2 the argument is the scalar t in [0, 1]; in general it is the point
/// (t_1, ..., t_{d-1}) with the weight of the first coordinate being 1 - sum t_j.
class PickandsFn {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;

  PickandsFn(std::size_t dim, Evaluator eval);
  static PickandsFn bivariate(std::function<double(double)> eval);

  static PickandsFn independence(std::size_t dim = 2);
  static PickandsFn comonotone(std::size_t dim = 2);
  static PickandsFn gumbel(double beta);
  static PickandsFn t_ev(double nu, double rho);

  std::size_t dim() const { return dim_; }
  double operator()(std::span<const double> t) const { return eval_(t); }
  double operator()(double t) const;

 private:
  std::size_t dim_;
  Evaluator eval_;
};

/// A parametric copula model. Parameters are validated at construction; the
/// evaluators never re-check them.
class CopulaSpec {
 public:
  static CopulaSpec outer_power_clayton(double theta, double beta);
  static CopulaSpec gumbel(double beta);
  static CopulaSpec t_copula(double nu, double rho);
  static CopulaSpec independence(std::size_t dim = 2);
  static CopulaSpec pickands(PickandsFn a);

  CopulaFamily family() const { return family_; }
  std::size_t dim() const { return dim_; }
  double theta() const { return theta_; }
  double beta() const { return beta_; }
  double nu() const { return nu_; }
  double rho() const { return rho_; }

  double cdf(std::span<const double> u) const;
  double cdf(double u, double v) const;

  /// Pickands function of the extreme-value attractor: Gumbel(beta) for the
  /// outer-power Clayton and Gumbel families, t-EV for the t copula, the stored
  /// function for PickandsForm and A = 1 for independence.
  PickandsFn attractor_pickands() const;
  CopulaSpec attractor() const;

  /// Flat key-value record with keys family, theta, beta, nu, rho, d.
  std::map<std::string, std::string> to_record() const;
  static CopulaSpec from_record(const std::map<std::string, std::string>& record);

 private:
  CopulaSpec(CopulaFamily family, std::size_t dim) : family_(family), dim_(dim) {}

  CopulaFamily family_;
  std::size_t dim_;
  double theta_ = 0.0;
  double beta_ = 1.0;
  double nu_ = 0.0;
  double rho_ = 0.0;
  std::optional<PickandsFn> pickands_;
};

double opc_cdf(double u, double v, double theta, double beta);
double gumbel_cdf(double u, double v, double beta);
double gumbel_pickands(double t, double beta);

/// Limit of m {C_{theta/m,beta} - C_{0,beta}} / theta, zero when min(u, v) = 0.
double gamma_beta_drift(double u, double v, double beta);

double t_cdf_1d(double x, double nu);
double t_quantile_1d(double p, double nu);
/// Integer nu (up to 1000) uses a closed-form finite series; otherwise, and for
/// values below 1e-6 where the series loses relative accuracy, the conditional
/// representation is integrated numerically.
double t_copula_cdf(double u, double v, double nu, double rho);
/// The quadrature path alone, for any nu > 0.
double t_copula_cdf_quadrature(double u, double v, double nu, double rho);
double t_ev_pickands(double t, double nu, double rho);

/// Extreme-value copula with Pickands function a, evaluated at u in [0,1]^d.
double copula_from_pickands(const PickandsFn& a, std::span<const double> u);

/// n iid draws from spec, one row per draw. Rows are drawn sequentially, so the
/// first n rows of a larger sample from the same generator state are identical.
Matrix sample(const CopulaSpec& spec, std::size_t n, Rng& rng);

/// Upper tail-dependence coefficient as a function of the dependence parameter
/// (beta for OPC/Gumbel, rho for the t copula with nu degrees of freedom).
double tail_dependence(CopulaFamily family, double param, double nu = 0.0);

/// Inverse of tail_dependence for lambda in (0, 1).
double tdc_to_param(CopulaFamily family, double lambda, std::optional<double> nu = std::nullopt);

}  // namespace blockmax
