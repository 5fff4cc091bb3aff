#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "blockmax/block_empirics.hpp"
#include "blockmax/copula.hpp"
#include "blockmax/errors.hpp"
#include "blockmax/random_repetition.hpp"

using namespace blockmax;
using namespace blockmax::random_repetition;

TEST(RepetitionConfig, RejectsTheta) {
  EXPECT_THROW(RepetitionConfig(0.0, CopulaSpec::independence()), ConfigError);
  EXPECT_THROW(RepetitionConfig(1.5, CopulaSpec::independence()), ConfigError);
  EXPECT_NO_THROW(RepetitionConfig(1.0, CopulaSpec::independence()));
}

TEST(Simulate, ThetaOneIsIidBitForBit) {
  const CopulaSpec base = CopulaSpec::outer_power_clayton(1.0, 2.0);
  Rng a(21), b(21);
  EXPECT_EQ(simulate(RepetitionConfig(1.0, base), 1000, a), sample(base, 1000, b));
}

TEST(Simulate, RepeatFraction) {
  const double theta = 0.3;
  const std::size_t n = 100000;
  Rng rng(22);
  const Series s = simulate(RepetitionConfig(theta, CopulaSpec::gumbel(1.5)), n, rng);
  std::size_t repeats = 0;
  for (std::size_t t = 1; t < n; ++t) repeats += s(t, 0) == s(t - 1, 0) && s(t, 1) == s(t - 1, 1);
  const double frac = static_cast<double>(repeats) / static_cast<double>(n - 1);
  EXPECT_LE(std::abs(frac - (1 - theta)), 3 * std::sqrt(theta * (1 - theta) / static_cast<double>(n - 1)));
}

TEST(Simulate, BlockMaximaHaveTies) {
  Rng rng(23);
  const Series s = simulate(RepetitionConfig(0.5, CopulaSpec::independence()), 20000, rng);
  const BlockMaxima bm = extract_block_maxima(s, 20);
  std::vector<double> col = bm.values.column(0);
  std::sort(col.begin(), col.end());
  EXPECT_LT(std::unique(col.begin(), col.end()) - col.begin(), static_cast<std::ptrdiff_t>(bm.k()));
}

TEST(ClosedFormFm, TrivialCases) {
  const CopulaSpec base = CopulaSpec::outer_power_clayton(1.0, 2.0);
  const double x[2] = {0.6, 0.8};
  const double f1 = base.cdf(0.6, 0.8);
  EXPECT_NEAR(closed_form_fm(RepetitionConfig(1.0, base), x, 7), std::pow(f1, 7.0), 1e-15);
  EXPECT_EQ(closed_form_fm(RepetitionConfig(0.4, base), x, 1), f1);
  EXPECT_NEAR(closed_form_fm_margin(0.5, 0.6, 3), 0.6 * 0.8 * 0.8, 1e-15);
  EXPECT_THROW(closed_form_fm(RepetitionConfig(0.4, base), x, 0), DomainError);
}

TEST(ClosedFormFm, SimulationOracle) {
  const RepetitionConfig cfg(0.5, CopulaSpec::outer_power_clayton(1.0, 2.0));
  const std::size_t m = 20, n = 100000, k = n / m;
  Rng rng(24);
  const BlockMaxima bm = extract_block_maxima(simulate(cfg, n, rng), m);
  for (auto [u, v] : {std::pair{0.95, 0.95}, std::pair{0.9, 0.98}}) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < k; ++i) hits += bm.values(i, 0) <= u && bm.values(i, 1) <= v;
    const double x[2] = {u, v};
    const double f = closed_form_fm(cfg, x, m);
    EXPECT_LE(std::abs(static_cast<double>(hits) / k - f), 3 * std::sqrt(f * (1 - f) / k)) << u << "," << v;
  }
}

TEST(ClosedFormFm, MonotoneInPointAndBlockLength) {
  const RepetitionConfig cfg(0.4, CopulaSpec::t_copula(4.0, 0.3));
  for (int i = 1; i <= 10; ++i)
    for (int j = 1; j <= 10; ++j) {
      const double x[2] = {i / 10.0, j / 10.0};
      const double right[2] = {std::min(1.0, x[0] + 0.1), x[1]};
      const double up[2] = {x[0], std::min(1.0, x[1] + 0.1)};
      for (std::size_t m : {1u, 2u, 5u, 20u}) {
        const double f = closed_form_fm(cfg, x, m);
        EXPECT_LE(f, closed_form_fm(cfg, right, m) + 1e-15);
        EXPECT_LE(f, closed_form_fm(cfg, up, m) + 1e-15);
        EXPECT_LE(closed_form_fm(cfg, x, m + 1), f + 1e-15);
      }
    }
}

TEST(MixingBound, Examples) {
  EXPECT_EQ(beta_mixing_bound(1.0, 3), 0.0);
  EXPECT_NEAR(beta_mixing_bound(0.5, 10), 2.0 / 1024.0, 1e-18);
  EXPECT_THROW(beta_mixing_bound(0.5, 0), DomainError);
}

TEST(MixingBound, DependenceProxyStaysBelowBound) {
  const double theta = 0.5, q = 0.5;
  const std::size_t lag = 5, n = 1000000;
  Rng rng(25);
  const Series s = simulate(RepetitionConfig(theta, CopulaSpec::independence()), n, rng);
  std::size_t both = 0, single = 0;
  for (std::size_t t = 0; t + lag < n; ++t) {
    both += s(t, 0) > q && s(t + lag, 0) > q;
    single += s(t, 0) > q;
  }
  const double m = static_cast<double>(n - lag);
  const double pb = both / m, ps = single / m;
  const double proxy = std::abs(pb - ps * ps);
  EXPECT_LE(proxy, beta_mixing_bound(theta, lag) + 3 * std::sqrt(pb * (1 - pb) / m));
  // The exact value is (1 - theta)^lag q (1 - q).
  EXPECT_NEAR(proxy, std::pow(1 - theta, 5.0) * 0.25, 0.01);
}

TEST(CmLimitCheck, IndependenceBase) {
  const double u[2] = {0.5, 0.5};
  Rng rng(26);
  const LimitCheck r = cm_limit_check(RepetitionConfig(0.5, CopulaSpec::independence()), 20, 5000, u, rng);
  EXPECT_EQ(r.c_infty, 0.25);
  EXPECT_LE(std::abs(r.cm_empirical - r.c_infty), 3 * std::sqrt(0.25 * 0.75 / 5000) + 2.0 / 5000);
}

TEST(CmLimitCheck, OpcBaseApproachesGumbel) {
  const RepetitionConfig cfg(0.5, CopulaSpec::outer_power_clayton(1.0, 2.0));
  const double u[2] = {0.5, 0.5};
  Rng rng(27);
  const LimitCheck r = cm_limit_check(cfg, 50, 10000, u, rng);
  EXPECT_NEAR(r.c_infty, gumbel_cdf(0.5, 0.5, 2.0), 1e-15);
  EXPECT_LE(std::abs(r.cm_empirical - r.c_infty), 0.02);
}

TEST(CmLimitCheck, GapShrinksWithBlockLength) {
  const RepetitionConfig cfg(0.5, CopulaSpec::outer_power_clayton(1.0, 2.0));
  const double u[2] = {0.5, 0.5};
  double gap1 = 0.0, gap50 = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng a(100 + seed), b(200 + seed);
    const LimitCheck r1 = cm_limit_check(cfg, 1, 2000, u, a);
    const LimitCheck r50 = cm_limit_check(cfg, 50, 2000, u, b);
    gap1 += r1.cm_empirical - r1.c_infty;
    gap50 += r50.cm_empirical - r50.c_infty;
  }
  EXPECT_LT(std::abs(gap50), std::abs(gap1));
}

TEST(Ties, RankAndAlternativeCopulasDifferButStayClose) {
  const RepetitionConfig cfg(0.5, CopulaSpec::outer_power_clayton(1.0, 2.0));
  const std::size_t m = 20, k = 2000;
  Rng rng(28);
  const BlockMaxima bm = extract_block_maxima(simulate(cfg, m * k, rng), m);
  const double sup = empirical_copula_sup_difference(bm);
  EXPECT_GT(sup, 0.0);
  EXPECT_LE(std::sqrt(static_cast<double>(k)) * sup, 0.5);
}
