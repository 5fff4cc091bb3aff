#include "blockmax/moving_maxima.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blockmax/errors.hpp"

namespace blockmax::moving_maxima {
namespace {

// u^e with u^0 = 1 for u > 0 and grounding at u = 0.
double power(double u, double e) {
  if (u <= 0.0) return 0.0;
  if (e == 0.0 || u >= 1.0) return 1.0;
  return std::pow(u, e);
}

// w^{1/a} with w^{1/0} = 0.
double root(double w, double a) {
  if (a == 0.0) return 0.0;
  if (a == 1.0) return w;
  return std::pow(w, 1.0 / a);
}

bool has_zero(std::span<const double> u) {
  return std::any_of(u.begin(), u.end(), [](double x) { return x <= 0.0; });
}

// D((u_j^{e_j})_j) for exponent row e.
double innovation_at_powers(const CopulaSpec& d, std::span<const double> u,
                            std::span<const double> exps, std::vector<double>& scratch) {
  for (std::size_t j = 0; j < u.size(); ++j) scratch[j] = power(u[j], exps[j]);
  return d.cdf(scratch);
}

void check_point(const MovingMaxConfig& config, std::span<const double> u) {
  if (u.size() != config.dim()) throw ConfigError("point dimension does not match the process");
}

}  // namespace

MovingMaxConfig::MovingMaxConfig(Matrix coeffs, CopulaSpec innovation)
    : coeffs_(std::move(coeffs)), innovation_(std::move(innovation)) {
  if (coeffs_.rows() == 0 || coeffs_.cols() == 0) throw ConfigError("coefficient matrix is empty");
  if (coeffs_.cols() != innovation_.dim())
    throw ConfigError("coefficient matrix has " + std::to_string(coeffs_.cols()) +
                      " columns but the innovation copula has dimension " +
                      std::to_string(innovation_.dim()));
  for (std::size_t j = 0; j < coeffs_.cols(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < coeffs_.rows(); ++i) {
      const double a = coeffs_(i, j);
      if (!std::isfinite(a) || a < 0.0) throw ConfigError("coefficients must be finite and >= 0");
      sum += a;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw ConfigError("coefficients of component " + std::to_string(j + 1) +
                        " must sum to 1 (got " + std::to_string(sum) + ")");
  }
}

MovingMaxConfig MovingMaxConfig::order_one(double a, double b, CopulaSpec innovation) {
  Matrix coeffs(2, 2);
  coeffs(0, 0) = a;
  coeffs(1, 0) = 1.0 - a;
  coeffs(0, 1) = b;
  coeffs(1, 1) = 1.0 - b;
  return MovingMaxConfig(std::move(coeffs), std::move(innovation));
}

Series simulate(const MovingMaxConfig& config, std::size_t n, Rng& rng) {
  const std::size_t p = config.order();
  const std::size_t d = config.dim();
  const Matrix w = sample(config.innovation(), n + p, rng);
  const Matrix& a = config.coeffs();
  Series out(n, d);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t j = 0; j < d; ++j) {
      double x = 0.0;
      for (std::size_t i = 0; i <= p; ++i) x = std::max(x, root(w(t + p - i, j), a(i, j)));
      out(t, j) = x;
    }
  }
  return out;
}

double closed_form_c1(const MovingMaxConfig& config, std::span<const double> u) {
  check_point(config, u);
  if (has_zero(u)) return 0.0;
  std::vector<double> scratch(u.size());
  double prod = 1.0;
  for (std::size_t i = 0; i <= config.order(); ++i)
    prod *= innovation_at_powers(config.innovation(), u, config.coeffs().row(i), scratch);
  return prod;
}

BlockCopulaExponents block_exponents(const MovingMaxConfig& config, std::size_t m) {
  if (m < 1) throw DomainError("block length must be >= 1");
  const int p = static_cast<int>(config.order());
  const int mm = static_cast<int>(m);
  const std::size_t d = config.dim();
  const std::size_t lags = m + config.order();
  BlockCopulaExponents out;
  out.first_lag = 1 - p;
  out.alpha = Matrix(d, lags);
  out.beta = Matrix(d, lags);
  out.alpha_total.assign(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    for (int s = 1 - p; s <= mm; ++s) {
      double hi = 0.0;
      for (int i = std::max(1 - s, 0); i <= std::min(mm - s, p); ++i)
        hi = std::max(hi, config.coeffs()(static_cast<std::size_t>(i), j));
      out.alpha(j, static_cast<std::size_t>(s - out.first_lag)) = hi;
      out.alpha_total[j] += hi;
    }
    for (std::size_t c = 0; c < lags; ++c) out.beta(j, c) = out.alpha(j, c) / out.alpha_total[j];
  }
  return out;
}

double closed_form_cm(const MovingMaxConfig& config, std::size_t m, std::span<const double> u) {
  check_point(config, u);
  const BlockCopulaExponents exps = block_exponents(config, m);
  if (has_zero(u)) return 0.0;
  const std::size_t d = config.dim();
  std::vector<double> col(d), scratch(d);
  double prod = 1.0;
  for (std::size_t c = 0; c < exps.beta.cols(); ++c) {
    for (std::size_t j = 0; j < d; ++j) col[j] = exps.beta(j, c);
    prod *= innovation_at_powers(config.innovation(), u, col, scratch);
  }
  return prod;
}

double block_marginal_cdf(const BlockCopulaExponents& exps, std::size_t j, double x) {
  return power(std::min(x, 1.0), exps.alpha_total.at(j));
}

std::pair<double, double> sandwich_bounds(const MovingMaxConfig& config, std::size_t m,
                                          std::span<const double> u) {
  check_point(config, u);
  const std::size_t p = config.order();
  if (m <= p) throw DomainError("sandwich bounds require m > p");
  if (has_zero(u)) return {0.0, 0.0};
  std::vector<double> scratch(u.size());
  auto d_r = [&](double r) {
    for (std::size_t j = 0; j < u.size(); ++j) scratch[j] = power(u[j], 1.0 / r);
    return std::pow(config.innovation().cdf(scratch), r);
  };
  const double lo = static_cast<double>(m - p);
  const double hi = static_cast<double>(m + p);
  return {std::pow(d_r(lo), hi / lo), std::pow(d_r(hi), lo / hi)};
}

double attractor_of_c1(const MovingMaxConfig& config, const CopulaSpec& d_infinity,
                       std::span<const double> u) {
  check_point(config, u);
  if (d_infinity.dim() != config.dim()) throw ConfigError("attractor dimension mismatch");
  if (has_zero(u)) return 0.0;
  std::vector<double> scratch(u.size());
  double prod = 1.0;
  for (std::size_t i = 0; i <= config.order(); ++i)
    prod *= innovation_at_powers(d_infinity, u, config.coeffs().row(i), scratch);
  return prod;
}

}  // namespace blockmax::moving_maxima
