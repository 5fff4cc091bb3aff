#pragma once

// Block maxima, pseudo-observations and the empirical copula variants built on them.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "blockmax/matrix.hpp"

namespace blockmax {

/// Componentwise maxima of k = floor(n/m) consecutive disjoint blocks.
struct BlockMaxima {
  Matrix values;
  std::size_t m = 0;

  std::size_t k() const { return values.rows(); }
  std::size_t dim() const { return values.cols(); }
};

/// Normalisation of the ranks: k (the default) or k + 1.
enum class Divisor { K, KPlusOne };

/// Normalised max-ranks of the block maxima, values in (0, 1].
struct PseudoObs {
  Matrix values;
  std::size_t divisor = 0;

  std::size_t k() const { return values.rows(); }
  std::size_t dim() const { return values.cols(); }
};

/// Drops the trailing remainder block of n - k m observations. Throws
/// DomainError unless 1 <= m <= n.
BlockMaxima extract_block_maxima(const Series& series, std::size_t m);

/// U_ij = #{l : M_lj <= M_ij} / divisor. Ties share the largest rank.
PseudoObs pseudo_observations(const BlockMaxima& bm, Divisor divisor = Divisor::K);

/// (1/k) #{i : U_i <= u componentwise}.
double empirical_copula(const PseudoObs& pseudo, std::span<const double> u);

/// Left-continuous generalised inverse of the empirical cdf of an ascending
/// sample: inf{x : H(x) >= p} for p in (0, 1], and sup{x : H(x) = 0}, which is
/// the sample minimum, for p = 0.
double generalized_inverse(std::span<const double> sorted_sample, double p);

/// F_hat(F_hat_1^{<-}(u_1), ..., F_hat_d^{<-}(u_d)) with the joint and marginal
/// empirical cdfs of the block maxima. Sorting is done once at construction.
class AltEmpiricalCopula {
 public:
  explicit AltEmpiricalCopula(const BlockMaxima& bm);
  double operator()(std::span<const double> u) const;

 private:
  const BlockMaxima* bm_;
  std::vector<std::vector<double>> sorted_;
};

double empirical_copula_alt(const BlockMaxima& bm, std::span<const double> u);

using MarginalCdf = std::function<double(double)>;

/// Empirical cdf of (F_1(M_i1), ..., F_d(M_id)) with the true block-maximum margins.
double empcop_known_margins(const BlockMaxima& bm, std::span<const MarginalCdf> margins,
                            std::span<const double> u);

/// Exact supremum over [0,1]^d of |empirical_copula - empirical_copula_alt|, both
/// normalised by k.
///
/// Both functions are constant on the open cells of the grid {i/k}^d, with the
/// rank version right-continuous and the alternative left-continuous, so the
/// supremum is attained at a grid point or just to the right of one. d = 2 uses
/// a prefix-count table (O(k^2)); other dimensions enumerate the grid.
double empirical_copula_sup_difference(const BlockMaxima& bm);

/// CSV export: comment lines "# m=", "# k=", "# d=" (and "# divisor=" for
/// pseudo-observations), a header x1,...,xd, then one row per block.
void write_block_maxima_csv(std::ostream& os, const BlockMaxima& bm);
void write_pseudo_obs_csv(std::ostream& os, const PseudoObs& pseudo, std::size_t m);

/// Series CSV: header x1,...,xd then one row per time point.
void write_series_csv(std::ostream& os, const Series& series);
/// Reads a series CSV. Lines starting with '#' and a non-numeric header line are
/// skipped. Throws IoError on malformed rows.
Series read_series_csv(std::istream& is);

}  // namespace blockmax
