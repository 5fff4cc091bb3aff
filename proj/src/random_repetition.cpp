#include "blockmax/random_repetition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blockmax/block_empirics.hpp"
#include "blockmax/errors.hpp"

namespace blockmax::random_repetition {

RepetitionConfig::RepetitionConfig(double theta, CopulaSpec base)
    : theta_(theta), base_(std::move(base)) {
  if (!(theta_ > 0.0 && theta_ <= 1.0))
    throw ConfigError("repetition theta must lie in (0, 1], got " + std::to_string(theta_));
}

Series simulate(const RepetitionConfig& config, std::size_t n, Rng& rng) {
  const Matrix fresh = sample(config.base(), n, rng);
  const Matrix start = sample(config.base(), 1, rng);
  Series out(n, config.dim());
  std::span<const double> current = start.row(0);
  for (std::size_t t = 0; t < n; ++t) {
    if (uniform_open01(rng) < config.theta()) current = fresh.row(t);
    std::copy(current.begin(), current.end(), out.row(t).begin());
  }
  return out;
}

double closed_form_fm(const RepetitionConfig& config, std::span<const double> x, std::size_t m) {
  if (m < 1) throw DomainError("block length must be >= 1");
  const double f1 = config.base().cdf(x);
  return f1 * std::pow(1.0 - config.theta() * (1.0 - f1), static_cast<double>(m - 1));
}

double closed_form_fm_margin(double theta, double x, std::size_t m) {
  if (m < 1) throw DomainError("block length must be >= 1");
  const double f1 = std::clamp(x, 0.0, 1.0);
  return f1 * std::pow(1.0 - theta * (1.0 - f1), static_cast<double>(m - 1));
}

double beta_mixing_bound(double theta, std::size_t lag) {
  if (lag < 1) throw DomainError("lag must be >= 1");
  if (!(theta > 0.0 && theta <= 1.0)) throw DomainError("theta must lie in (0, 1]");
  return 2.0 * std::pow(1.0 - theta, static_cast<double>(lag));
}

LimitCheck cm_limit_check(const RepetitionConfig& config, std::size_t m, std::size_t k,
                          std::span<const double> u, Rng& rng) {
  if (k < 1) throw DomainError("need at least one block");
  const Series path = simulate(config, m * k, rng);
  const PseudoObs pseudo = pseudo_observations(extract_block_maxima(path, m));
  return {empirical_copula(pseudo, u), config.base().attractor().cdf(u)};
}

}  // namespace blockmax::random_repetition
