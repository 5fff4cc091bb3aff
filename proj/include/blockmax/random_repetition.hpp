#pragma once

// Random-repetition process: X_t = xi_t with probability theta, X_{t-1} otherwise.

#include <cstddef>
#include <span>

#include "blockmax/copula.hpp"
#include "blockmax/matrix.hpp"
#include "blockmax/rng.hpp"

namespace blockmax::random_repetition {

class RepetitionConfig {
 public:
  /// theta is the probability of a fresh draw, 0 < theta <= 1.
  RepetitionConfig(double theta, CopulaSpec base);

  double theta() const { return theta_; }
  const CopulaSpec& base() const { return base_; }
  std::size_t dim() const { return base_.dim(); }

 private:
  double theta_;
  CopulaSpec base_;
};

/// Stationary path of length n on the copula scale.
///
/// Stream order: the n fresh vectors xi_1..xi_n, then X_0, then one uniform per
/// step for the indicators. With theta = 1 the path therefore equals
/// sample(base, n, rng) bit for bit.
Series simulate(const RepetitionConfig& config, std::size_t n, Rng& rng);

/// F_m(x) = F_1(x) [1 - theta {1 - F_1(x)}]^{m-1} with F_1 the base copula.
double closed_form_fm(const RepetitionConfig& config, std::span<const double> x, std::size_t m);

/// Marginal version with F_{1,j}(x) = x.
double closed_form_fm_margin(double theta, double x, std::size_t m);

/// The phi-mixing bound 2 (1 - theta)^lag, which also bounds beta(lag).
double beta_mixing_bound(double theta, std::size_t lag);

struct LimitCheck {
  double cm_empirical = 0.0;
  double c_infty = 0.0;
};

/// Empirical copula at u of k block maxima (block length m) from one simulated
/// path, next to the value of the extreme-value attractor of the base copula.
LimitCheck cm_limit_check(const RepetitionConfig& config, std::size_t m, std::size_t k,
                          std::span<const double> u, Rng& rng);

}  // namespace blockmax::random_repetition
