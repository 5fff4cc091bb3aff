#pragma once

// d-variate moving maxima process of order p with uniform margins, and the
// closed-form copulas of its block maxima.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "blockmax/copula.hpp"
#include "blockmax/matrix.hpp"
#include "blockmax/rng.hpp"

namespace blockmax::moving_maxima {

/// U_{tj} = max_{i=0..p} W_{t-i,j}^{1/a_{ij}} with W_s iid from the innovation copula.
class MovingMaxConfig {
 public:
  /// coeffs is (p+1) x d, nonnegative, with every column summing to one (to 1e-12).
  MovingMaxConfig(Matrix coeffs, CopulaSpec innovation);

  /// Bivariate order-one process with lag weights (a, 1-a) and (b, 1-b).
  static MovingMaxConfig order_one(double a, double b, CopulaSpec innovation);

  std::size_t order() const { return coeffs_.rows() - 1; }
  std::size_t dim() const { return coeffs_.cols(); }
  const Matrix& coeffs() const { return coeffs_; }
  const CopulaSpec& innovation() const { return innovation_; }

 private:
  Matrix coeffs_;
  CopulaSpec innovation_;
};

/// Exponents of the block-maximum distribution for block length m.
///
/// Lags s = 1-p..m are stored at column s - first_lag. alpha(j, .) is the
/// windowed maximum of the coefficients, alpha_total[j] its row sum and
/// beta(j, .) = alpha(j, .) / alpha_total[j].
struct BlockCopulaExponents {
  int first_lag = 0;
  Matrix alpha;
  std::vector<double> alpha_total;
  Matrix beta;
};

/// n observations of the stationary process. Draws p + n innovation rows in one
/// call to sample(); the first p rows are burn-in.
Series simulate(const MovingMaxConfig& config, std::size_t n, Rng& rng);

/// Copula C_1 of one observation: prod_i D((u_j^{a_ij})_j).
double closed_form_c1(const MovingMaxConfig& config, std::span<const double> u);

BlockCopulaExponents block_exponents(const MovingMaxConfig& config, std::size_t m);

/// Copula C_m of the block maxima over m consecutive observations.
double closed_form_cm(const MovingMaxConfig& config, std::size_t m, std::span<const double> u);

/// Marginal cdf of a block maximum, F_{m,j}(x) = x^{alpha_total[j]}.
double block_marginal_cdf(const BlockCopulaExponents& exps, std::size_t j, double x);

/// (D_{m-p}(u)^{(m+p)/(m-p)}, D_{m+p}(u)^{(m-p)/(m+p)}) with D_r(u) = D(u^{1/r})^r.
/// Requires m > p.
std::pair<double, double> sandwich_bounds(const MovingMaxConfig& config, std::size_t m,
                                          std::span<const double> u);

/// Extreme-value attractor of C_1: prod_i D_inf((u_j^{a_ij})_j). Differs in general
/// from lim C_m = D_inf.
double attractor_of_c1(const MovingMaxConfig& config, const CopulaSpec& d_infinity,
                       std::span<const double> u);

}  // namespace blockmax::moving_maxima
