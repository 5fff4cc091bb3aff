#include "blockmax/block_empirics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "blockmax/csv.hpp"
#include "blockmax/errors.hpp"

namespace blockmax {
namespace {

// Max-ranks of one column: #{l : x_l <= x_i}.
std::vector<std::size_t> max_ranks(const std::vector<double>& column) {
  std::vector<double> sorted = column;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> ranks(column.size());
  for (std::size_t i = 0; i < column.size(); ++i)
    ranks[i] = static_cast<std::size_t>(
        std::upper_bound(sorted.begin(), sorted.end(), column[i]) - sorted.begin());
  return ranks;
}

void check_point(std::span<const double> u, std::size_t dim) {
  if (u.size() != dim)
    throw DomainError("point has dimension " + std::to_string(u.size()) + ", expected " +
                      std::to_string(dim));
}

void write_rows(std::ostream& os, const Matrix& values) {
  for (std::size_t j = 0; j < values.cols(); ++j) os << (j ? ",x" : "x") << j + 1;
  os << '\n';
  for (std::size_t i = 0; i < values.rows(); ++i) {
    for (std::size_t j = 0; j < values.cols(); ++j)
      os << (j ? "," : "") << csv::format_number(values(i, j));
    os << '\n';
  }
  if (!os) throw IoError("write failed");
}

}  // namespace

BlockMaxima extract_block_maxima(const Series& series, std::size_t m) {
  const std::size_t n = series.rows();
  if (m < 1 || m > n)
    throw DomainError("block length m=" + std::to_string(m) + " must lie in [1, n=" +
                      std::to_string(n) + "]");
  const std::size_t k = n / m;
  const std::size_t d = series.cols();
  BlockMaxima bm{Matrix(k, d), m};
  for (std::size_t b = 0; b < k; ++b)
    for (std::size_t j = 0; j < d; ++j) {
      double mx = series(b * m, j);
      for (std::size_t t = b * m + 1; t < (b + 1) * m; ++t) mx = std::max(mx, series(t, j));
      bm.values(b, j) = mx;
    }
  return bm;
}

PseudoObs pseudo_observations(const BlockMaxima& bm, Divisor divisor) {
  const std::size_t k = bm.k();
  if (k == 0) throw DomainError("no block maxima");
  PseudoObs out{Matrix(k, bm.dim()), divisor == Divisor::K ? k : k + 1};
  const double denom = static_cast<double>(out.divisor);
  for (std::size_t j = 0; j < bm.dim(); ++j) {
    const auto ranks = max_ranks(bm.values.column(j));
    for (std::size_t i = 0; i < k; ++i) out.values(i, j) = static_cast<double>(ranks[i]) / denom;
  }
  return out;
}

double empirical_copula(const PseudoObs& pseudo, std::span<const double> u) {
  check_point(u, pseudo.dim());
  std::size_t count = 0;
  for (std::size_t i = 0; i < pseudo.k(); ++i) {
    bool below = true;
    for (std::size_t j = 0; j < pseudo.dim() && below; ++j) below = pseudo.values(i, j) <= u[j];
    count += below;
  }
  return static_cast<double>(count) / static_cast<double>(pseudo.k());
}

double generalized_inverse(std::span<const double> sorted_sample, double p) {
  const std::size_t n = sorted_sample.size();
  if (n == 0) throw DomainError("empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probability outside [0, 1]");
  if (p == 0.0) return sorted_sample.front();
  // Smallest r with r / n >= p; guard against rounding in n * p.
  auto r = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
  r = std::clamp<std::size_t>(r, 1, n);
  while (r > 1 && static_cast<double>(r - 1) / static_cast<double>(n) >= p) --r;
  while (r < n && static_cast<double>(r) / static_cast<double>(n) < p) ++r;
  return sorted_sample[r - 1];
}

AltEmpiricalCopula::AltEmpiricalCopula(const BlockMaxima& bm) : bm_(&bm) {
  if (bm.k() == 0) throw DomainError("no block maxima");
  sorted_.reserve(bm.dim());
  for (std::size_t j = 0; j < bm.dim(); ++j) {
    auto col = bm.values.column(j);
    std::sort(col.begin(), col.end());
    sorted_.push_back(std::move(col));
  }
}

double AltEmpiricalCopula::operator()(std::span<const double> u) const {
  check_point(u, bm_->dim());
  std::vector<double> x(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) x[j] = generalized_inverse(sorted_[j], u[j]);
  std::size_t count = 0;
  for (std::size_t i = 0; i < bm_->k(); ++i) {
    bool below = true;
    for (std::size_t j = 0; j < x.size() && below; ++j) below = bm_->values(i, j) <= x[j];
    count += below;
  }
  return static_cast<double>(count) / static_cast<double>(bm_->k());
}

double empirical_copula_alt(const BlockMaxima& bm, std::span<const double> u) {
  return AltEmpiricalCopula(bm)(u);
}

double empcop_known_margins(const BlockMaxima& bm, std::span<const MarginalCdf> margins,
                            std::span<const double> u) {
  check_point(u, bm.dim());
  if (margins.size() != bm.dim()) throw DomainError("one marginal cdf per component required");
  if (bm.k() == 0) throw DomainError("no block maxima");
  std::size_t count = 0;
  for (std::size_t i = 0; i < bm.k(); ++i) {
    bool below = true;
    for (std::size_t j = 0; j < bm.dim() && below; ++j) below = margins[j](bm.values(i, j)) <= u[j];
    count += below;
  }
  return static_cast<double>(count) / static_cast<double>(bm.k());
}

double empirical_copula_sup_difference(const BlockMaxima& bm) {
  const std::size_t k = bm.k();
  const std::size_t d = bm.dim();
  if (k == 0) throw DomainError("no block maxima");

  // Rank-space thresholds per coordinate. mr[r] = #{l : M_l <= M_(r)} for
  // r = 1..k, with mr[0] := mr[1] because the inverse at 0 is the minimum.
  std::vector<std::vector<std::size_t>> ranks(d), mr(d);
  for (std::size_t j = 0; j < d; ++j) {
    ranks[j] = max_ranks(bm.values.column(j));
    std::vector<std::size_t> sorted = ranks[j];
    std::sort(sorted.begin(), sorted.end());
    mr[j].resize(k + 1);
    for (std::size_t r = 1; r <= k; ++r) mr[j][r] = sorted[r - 1];
    mr[j][0] = mr[j][1];
  }

  // States of one coordinate: (rank threshold, alternative threshold) at the
  // grid point g/k and on the open cell (g/k, (g+1)/k).
  struct State {
    std::size_t rank, alt;
  };
  std::vector<std::vector<State>> states(d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t g = 0; g <= k; ++g) {
      states[j].push_back({g, mr[j][g]});
      if (g < k) states[j].push_back({g, mr[j][g + 1]});
    }
  }

  const double inv_k = 1.0 / static_cast<double>(k);
  double sup = 0.0;

  if (d == 2) {
    // count[a][b] = #{i : R_i1 <= a, R_i2 <= b}
    const std::size_t w = k + 1;
    std::vector<std::size_t> count(w * w, 0);
    for (std::size_t i = 0; i < k; ++i) ++count[ranks[0][i] * w + ranks[1][i]];
    for (std::size_t a = 0; a < w; ++a)
      for (std::size_t b = 0; b < w; ++b) {
        std::size_t c = count[a * w + b];
        if (a) c += count[(a - 1) * w + b];
        if (b) c += count[a * w + b - 1];
        if (a && b) c -= count[(a - 1) * w + b - 1];
        count[a * w + b] = c;
      }
    for (const State& s1 : states[0])
      for (const State& s2 : states[1]) {
        const double diff = std::abs(static_cast<double>(count[s1.rank * w + s2.rank]) -
                                     static_cast<double>(count[s1.alt * w + s2.alt]));
        sup = std::max(sup, diff * inv_k);
      }
    return sup;
  }

  std::vector<std::size_t> idx(d, 0);
  while (true) {
    std::size_t c_rank = 0, c_alt = 0;
    for (std::size_t i = 0; i < k; ++i) {
      bool in_rank = true, in_alt = true;
      for (std::size_t j = 0; j < d; ++j) {
        const State& s = states[j][idx[j]];
        in_rank = in_rank && ranks[j][i] <= s.rank;
        in_alt = in_alt && ranks[j][i] <= s.alt;
      }
      c_rank += in_rank;
      c_alt += in_alt;
    }
    sup = std::max(sup, std::abs(static_cast<double>(c_rank) - static_cast<double>(c_alt)) * inv_k);
    std::size_t j = 0;
    while (j < d && ++idx[j] == states[j].size()) idx[j++] = 0;
    if (j == d) break;
  }
  return sup;
}

void write_block_maxima_csv(std::ostream& os, const BlockMaxima& bm) {
  os << "# m=" << bm.m << "\n# k=" << bm.k() << "\n# d=" << bm.dim() << '\n';
  write_rows(os, bm.values);
}

void write_pseudo_obs_csv(std::ostream& os, const PseudoObs& pseudo, std::size_t m) {
  os << "# m=" << m << "\n# k=" << pseudo.k() << "\n# d=" << pseudo.dim()
     << "\n# divisor=" << pseudo.divisor << '\n';
  write_rows(os, pseudo.values);
}

void write_series_csv(std::ostream& os, const Series& series) { write_rows(os, series); }

Series read_series_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line.front() == '#') continue;
    const auto fields = csv::split(line);
    std::vector<double> row;
    row.reserve(fields.size());
    try {
      for (const auto& f : fields) row.push_back(csv::parse_number(f));
    } catch (const IoError& e) {
      if (!header_seen && rows.empty()) {
        header_seen = true;
        continue;
      }
      throw IoError("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw IoError("line " + std::to_string(lineno) + ": ragged row");
    rows.push_back(std::move(row));
  }
  if (is.bad()) throw IoError("read error");
  if (rows.empty()) throw IoError("series file contains no data rows");
  Series out(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) out(i, j) = rows[i][j];
  return out;
}

}  // namespace blockmax
