#pragma once

// Adaptive Gauss-Kronrod quadrature and bracketing root finders.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "blockmax/errors.hpp"

namespace blockmax::numerics {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  std::size_t max_intervals = 50000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t intervals = 0;
  std::size_t evaluations = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK QK15 constants).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Lagrange weights extrapolating from the four outermost Kronrod nodes on one
// side to the adjacent end point.
constexpr std::array<double, 4> end_weights() {
  std::array<double, 4> w{};
  for (std::size_t i = 0; i < 4; ++i) {
    double prod = 1.0;
    for (std::size_t j = 0; j < 4; ++j)
      if (j != i)
        prod *= (1.0 - kKronrodNodes[j]) / (kKronrodNodes[i] - kKronrodNodes[j]);
    w[i] = prod;
  }
  return w;
}
inline constexpr std::array<double, 4> kEndWeights = end_weights();

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment kronrod15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double gauss = fc * kGaussWeights[3];
  double kronrod = fc * kKronrodWeights[7];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> f1{}, f2{};
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const double pair = f1[j] + f2[j];
    kronrod += kKronrodWeights[j] * pair;
    abs_sum += kKronrodWeights[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::abs(fc - mean);
  for (std::size_t j = 0; j < 7; ++j)
    asc += kKronrodWeights[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  const double value = kronrod * half;
  abs_sum *= std::abs(half);
  asc *= std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (abs_sum > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(50.0 * eps * abs_sum, err);

  // A jump between the outermost node and an end point is invisible to both rules.
  // Probe the end points and charge the gap for their deviation from a cubic
  // extrapolation of the four outermost nodes; for smooth f that deviation is
  // fourth order and the probe costs nothing. Non-finite end values (integrable
  // singularities) are skipped.
  const double gap = std::abs(half) * (1.0 - kKronrodNodes[0]);
  auto extrapolate = [](const std::array<double, 7>& g) {
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) sum += kEndWeights[i] * g[i];
    return sum;
  };
  const double fa = f(a);
  const double fb = f(b);
  if (std::isfinite(fa)) err += std::abs(fa - extrapolate(f1)) * gap;
  if (std::isfinite(fb)) err += std::abs(fb - extrapolate(f2)) * gap;
  return {a, b, value, err};
}

}  // namespace detail

/// Globally adaptive G7-K15 quadrature of f over the finite interval [a, b].
///
/// The interval with the largest error estimate is bisected until the summed
/// error estimate drops below max(abs_tol, rel_tol * |value|). Throws
/// NumericError, carrying the achieved error and interval count, when the
/// interval budget is exhausted or the integrand produces a non-finite value.
/// The rule itself never uses end-point values, so integrable end-point
/// singularities are allowed; end points are only probed for hidden jumps.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
  QuadratureResult res;
  if (a == b) return res;
  std::priority_queue<detail::Segment> heap;
  heap.push(detail::kronrod15(f, a, b));
  double value = heap.top().value;
  double error = heap.top().error;
  res.evaluations = 17;
  // Error mass locked into segments too narrow to split further.
  double locked_error = 0.0;
  double locked_value = 0.0;

  auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(value)); };
  while (!(error <= target())) {
    if (!std::isfinite(value) || !std::isfinite(error)) {
      std::ostringstream msg;
      msg << "quadrature: non-finite integrand on [" << a << ", " << b << "]";
      throw NumericError(msg.str());
    }
    if (heap.empty() || heap.size() >= opts.max_intervals) {
      std::ostringstream msg;
      msg << "quadrature did not converge on [" << a << ", " << b << "]: error estimate " << error
          << " > tolerance " << target() << " after " << heap.size() << " intervals";
      throw NumericError(msg.str());
    }
    const detail::Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      locked_error += worst.error;
      locked_value += worst.value;
      if (locked_error > target()) {
        std::ostringstream msg;
        msg << "quadrature: unresolvable feature near " << mid << " (error " << locked_error
            << ", tolerance " << target() << ")";
        throw NumericError(msg.str());
      }
      continue;
    }
    const detail::Segment left = detail::kronrod15(f, worst.a, mid);
    const detail::Segment right = detail::kronrod15(f, mid, worst.b);
    res.evaluations += 34;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum from the segments to shed accumulated cancellation in the running totals.
  double total = locked_value;
  double total_err = locked_error;
  res.intervals = heap.size();
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  res.value = total;
  res.error = total_err;
  return res;
}

/// Integral over (-inf, upper] via the substitution s = upper - x / (1 - x).
template <class F>
QuadratureResult integrate_to(F&& f, double upper, const QuadratureOptions& opts = {}) {
  auto g = [&](double x) {
    const double w = 1.0 - x;
    return f(upper - x / w) / (w * w);
  };
  return integrate(g, 0.0, 1.0, opts);
}

/// Bisection for an increasing function: returns x in [lo, hi] with f(x) ~ target,
/// stopping when the bracket is narrower than x_tol. f(lo) <= target <= f(hi) is
/// assumed; a non-finite or out-of-order evaluation throws NumericError.
template <class F>
double bisect_increasing(F&& f, double target, double lo, double hi, double x_tol,
                         int max_iter = 200) {
  if (!(lo < hi)) throw NumericError("bisection: empty bracket");
  for (int it = 0; it < max_iter && hi - lo > x_tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (!std::isfinite(fm)) {
      std::ostringstream msg;
      msg << "bisection: non-finite value at x=" << mid << " (target " << target << ")";
      throw NumericError(msg.str());
    }
    if (fm < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace blockmax::numerics
