#include "blockmax/copula.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/tools/roots.hpp>

#include "blockmax/errors.hpp"
#include "blockmax/numerics.hpp"

namespace blockmax {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)), tolerating -inf arguments.
double log_sum_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// log of (x^beta + y^beta) for x, y >= 0.
double log_power_sum(double x, double y, double beta) {
  const double lx = x > 0.0 ? beta * std::log(x) : kNegInf;
  const double ly = y > 0.0 ? beta * std::log(y) : kNegInf;
  return log_sum_exp(lx, ly);
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw ConfigError(std::string(what) + " must be finite");
}

void validate_beta(double beta) {
  require_finite(beta, "beta");
  if (beta < 1.0) throw ConfigError("beta must be >= 1, got " + format_double(beta));
}

void validate_t_params(double nu, double rho) {
  require_finite(nu, "nu");
  require_finite(rho, "rho");
  if (nu <= 0.0) throw ConfigError("nu must be > 0, got " + format_double(nu));
  if (rho <= -1.0 || rho >= 1.0) throw ConfigError("rho must lie in (-1, 1), got " + format_double(rho));
}

double t_density(double s, double nu, double log_norm) {
  return std::exp(log_norm - 0.5 * (nu + 1.0) * std::log1p(s * s / nu));
}

// Conditional distribution function dC/du (u, v), evaluated in log space.
double opc_partial_u(double u, double v, double theta, double beta) {
  const double lu = std::log(u);
  const double x = std::expm1(-theta * lu);
  const double y = std::expm1(-theta * std::log(v));
  const double log_s_sum = log_power_sum(x, y, beta);
  const double s = std::exp(log_s_sum / beta);
  const double log_h = -(1.0 / theta + 1.0) * std::log1p(s) + (1.0 / beta - 1.0) * log_s_sum +
                       (beta - 1.0) * std::log(x) - (theta + 1.0) * lu;
  return std::exp(log_h);
}

double gumbel_partial_u(double u, double v, double beta) {
  const double lu = std::log(u);
  const double x = -lu;
  const double y = -std::log(v);
  const double log_s_sum = log_power_sum(x, y, beta);
  const double s = std::exp(log_s_sum / beta);
  const double log_h = -s + (1.0 / beta - 1.0) * log_s_sum + (beta - 1.0) * std::log(x) - lu;
  return std::exp(log_h);
}

// Central difference in u with step h, one-sided near the boundary.
double finite_difference_partial_u(const CopulaSpec& spec, double u, double v) {
  constexpr double h = 1e-7;
  const double lo = std::max(0.0, u - h);
  const double hi = std::min(1.0, u + h);
  return (spec.cdf(hi, v) - spec.cdf(lo, v)) / (hi - lo);
}

// Conditional inversion: V solves dC/du (U, V) = W.
template <class Partial>
void sample_conditional(Matrix& out, Rng& rng, Partial&& partial) {
  for (std::size_t i = 0; i < out.rows(); ++i) {
    const double u = uniform_open01(rng);
    const double w = uniform_open01(rng);
    const double v = numerics::bisect_increasing([&](double x) { return partial(u, x); }, w, 0.0,
                                                 1.0, 1e-12);
    if (!(v > 0.0 && v < 1.0)) {
      std::ostringstream msg;
      msg << "conditional inversion left (0,1): u=" << u << " w=" << w << " v=" << v;
      throw NumericError(msg.str());
    }
    out(i, 0) = u;
    out(i, 1) = v;
  }
}

}  // namespace

std::string to_string(CopulaFamily family) {
  switch (family) {
    case CopulaFamily::OuterPowerClayton: return "opc";
    case CopulaFamily::GumbelHougaard: return "gumbel";
    case CopulaFamily::TCopula: return "t";
    case CopulaFamily::Independence: return "independence";
    case CopulaFamily::PickandsForm: return "pickands";
  }
  return "unknown";
}

CopulaFamily parse_family(const std::string& name) {
  if (name == "opc") return CopulaFamily::OuterPowerClayton;
  if (name == "gumbel") return CopulaFamily::GumbelHougaard;
  if (name == "t") return CopulaFamily::TCopula;
  if (name == "independence") return CopulaFamily::Independence;
  throw ConfigError("unknown copula family '" + name + "' (expected opc, gumbel, t, independence)");
}

// ---------------------------------------------------------------------------
// PickandsFn

PickandsFn::PickandsFn(std::size_t dim, Evaluator eval) : dim_(dim), eval_(std::move(eval)) {
  if (dim_ < 2) throw ConfigError("Pickands function dimension must be >= 2");
  if (!eval_) throw ConfigError("Pickands function evaluator is empty");
}

PickandsFn PickandsFn::bivariate(std::function<double(double)> eval) {
  return PickandsFn(2, [f = std::move(eval)](std::span<const double> t) { return f(t[0]); });
}

double PickandsFn::operator()(double t) const {
  const double arg[1] = {t};
  return eval_(std::span<const double>(arg, 1));
}

PickandsFn PickandsFn::independence(std::size_t dim) {
  return PickandsFn(dim, [](std::span<const double>) { return 1.0; });
}

PickandsFn PickandsFn::comonotone(std::size_t dim) {
  return PickandsFn(dim, [](std::span<const double> t) {
    double rest = 1.0;
    double hi = 0.0;
    for (double tj : t) {
      rest -= tj;
      hi = std::max(hi, tj);
    }
    return std::max(hi, rest);
  });
}

PickandsFn PickandsFn::gumbel(double beta) {
  validate_beta(beta);
  return bivariate([beta](double t) { return gumbel_pickands(t, beta); });
}

PickandsFn PickandsFn::t_ev(double nu, double rho) {
  validate_t_params(nu, rho);
  return bivariate([nu, rho](double t) { return t_ev_pickands(t, nu, rho); });
}

// ---------------------------------------------------------------------------
// CopulaSpec

CopulaSpec CopulaSpec::outer_power_clayton(double theta, double beta) {
  require_finite(theta, "theta");
  if (theta <= 0.0) throw ConfigError("theta must be > 0, got " + format_double(theta));
  validate_beta(beta);
  CopulaSpec spec(CopulaFamily::OuterPowerClayton, 2);
  spec.theta_ = theta;
  spec.beta_ = beta;
  return spec;
}

CopulaSpec CopulaSpec::gumbel(double beta) {
  validate_beta(beta);
  CopulaSpec spec(CopulaFamily::GumbelHougaard, 2);
  spec.beta_ = beta;
  return spec;
}

CopulaSpec CopulaSpec::t_copula(double nu, double rho) {
  validate_t_params(nu, rho);
  CopulaSpec spec(CopulaFamily::TCopula, 2);
  spec.nu_ = nu;
  spec.rho_ = rho;
  return spec;
}

CopulaSpec CopulaSpec::independence(std::size_t dim) {
  if (dim < 2) throw ConfigError("copula dimension must be >= 2");
  return CopulaSpec(CopulaFamily::Independence, dim);
}

CopulaSpec CopulaSpec::pickands(PickandsFn a) {
  CopulaSpec spec(CopulaFamily::PickandsForm, a.dim());
  spec.pickands_ = std::move(a);
  return spec;
}

double CopulaSpec::cdf(double u, double v) const {
  const double uv[2] = {u, v};
  return cdf(std::span<const double>(uv, 2));
}

double CopulaSpec::cdf(std::span<const double> u) const {
  if (u.size() != dim_) throw ConfigError("cdf argument has wrong dimension");
  switch (family_) {
    case CopulaFamily::OuterPowerClayton: return opc_cdf(u[0], u[1], theta_, beta_);
    case CopulaFamily::GumbelHougaard: return gumbel_cdf(u[0], u[1], beta_);
    case CopulaFamily::TCopula: return t_copula_cdf(u[0], u[1], nu_, rho_);
    case CopulaFamily::Independence: {
      double p = 1.0;
      for (double x : u) p *= std::clamp(x, 0.0, 1.0);
      return p;
    }
    case CopulaFamily::PickandsForm: return copula_from_pickands(*pickands_, u);
  }
  return 0.0;
}

PickandsFn CopulaSpec::attractor_pickands() const {
  switch (family_) {
    case CopulaFamily::OuterPowerClayton:
    case CopulaFamily::GumbelHougaard: return PickandsFn::gumbel(beta_);
    case CopulaFamily::TCopula: return PickandsFn::t_ev(nu_, rho_);
    case CopulaFamily::Independence: return PickandsFn::independence(dim_);
    case CopulaFamily::PickandsForm: return *pickands_;
  }
  return PickandsFn::independence(dim_);
}

CopulaSpec CopulaSpec::attractor() const {
  switch (family_) {
    case CopulaFamily::OuterPowerClayton: return gumbel(beta_);
    case CopulaFamily::TCopula: return pickands(PickandsFn::t_ev(nu_, rho_));
    default: return *this;
  }
}

std::map<std::string, std::string> CopulaSpec::to_record() const {
  if (family_ == CopulaFamily::PickandsForm)
    throw ConfigError("a Pickands-form copula has no flat record representation");
  return {{"family", to_string(family_)}, {"theta", format_double(theta_)},
          {"beta", format_double(beta_)},  {"nu", format_double(nu_)},
          {"rho", format_double(rho_)},    {"d", std::to_string(dim_)}};
}

CopulaSpec CopulaSpec::from_record(const std::map<std::string, std::string>& record) {
  auto get = [&](const std::string& key) -> double {
    auto it = record.find(key);
    if (it == record.end()) throw ConfigError("copula record is missing key '" + key + "'");
    try {
      std::size_t used = 0;
      const double x = std::stod(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument(it->second);
      return x;
    } catch (const std::exception&) {
      throw ConfigError("copula record key '" + key + "' is not a number: " + it->second);
    }
  };
  auto fam = record.find("family");
  if (fam == record.end()) throw ConfigError("copula record is missing key 'family'");
  const CopulaFamily family = parse_family(fam->second);
  if (record.count("d") && family != CopulaFamily::Independence && get("d") != 2.0)
    throw ConfigError(to_string(family) + " copula is bivariate only");
  switch (family) {
    case CopulaFamily::OuterPowerClayton: return outer_power_clayton(get("theta"), get("beta"));
    case CopulaFamily::GumbelHougaard: return gumbel(get("beta"));
    case CopulaFamily::TCopula: return t_copula(get("nu"), get("rho"));
    case CopulaFamily::Independence: {
      const double d = record.count("d") ? get("d") : 2.0;
      if (d < 2.0 || d != std::floor(d)) throw ConfigError("d must be an integer >= 2");
      return independence(static_cast<std::size_t>(d));
    }
    default: break;
  }
  throw ConfigError("unsupported copula family in record");
}

// ---------------------------------------------------------------------------
// Closed forms

double opc_cdf(double u, double v, double theta, double beta) {
  if (u <= 0.0 || v <= 0.0) return 0.0;
  if (u >= 1.0) return std::min(v, 1.0);
  if (v >= 1.0) return u;
  const double x = std::expm1(-theta * std::log(u));
  const double y = std::expm1(-theta * std::log(v));
  const double s = std::exp(log_power_sum(x, y, beta) / beta);
  return std::exp(-std::log1p(s) / theta);
}

double gumbel_cdf(double u, double v, double beta) {
  if (u <= 0.0 || v <= 0.0) return 0.0;
  if (u >= 1.0) return std::min(v, 1.0);
  if (v >= 1.0) return u;
  const double s = std::exp(log_power_sum(-std::log(u), -std::log(v), beta) / beta);
  return std::exp(-s);
}

double gumbel_pickands(double t, double beta) {
  if (t <= 0.0 || t >= 1.0) return 1.0;
  return std::exp(log_power_sum(t, 1.0 - t, beta) / beta);
}

double gamma_beta_drift(double u, double v, double beta) {
  if (u <= 0.0 || v <= 0.0) return 0.0;
  const double x = -std::log(u);
  const double y = -std::log(v);
  if (x == 0.0 || y == 0.0) return 0.0;
  const double sum = std::pow(x, beta) + std::pow(y, beta);
  const double s = std::pow(sum, 1.0 / beta);
  const double mixed = s / sum * (std::pow(x, beta + 1.0) + std::pow(y, beta + 1.0));
  return 0.5 * std::exp(-s) * (s * s - mixed);
}

double t_cdf_1d(double x, double nu) {
  if (!(nu > 0.0)) throw DomainError("t_cdf_1d: nu must be > 0");
  if (std::isnan(x)) throw DomainError("t_cdf_1d: x is NaN");
  if (x == 0.0) return 0.5;
  if (std::isinf(x)) return x > 0.0 ? 1.0 : 0.0;
  const double x2 = x * x;
  // P(T > |x|) through whichever incomplete-beta argument avoids cancellation.
  const double tail = x2 < nu ? 0.5 * boost::math::ibetac(0.5, 0.5 * nu, x2 / (nu + x2))
                              : 0.5 * boost::math::ibeta(0.5 * nu, 0.5, nu / (nu + x2));
  return x < 0.0 ? tail : 1.0 - tail;
}

double t_quantile_1d(double p, double nu) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("t_quantile_1d: p must lie in (0, 1)");
  if (!(nu > 0.0)) throw DomainError("t_quantile_1d: nu must be > 0");
  if (p == 0.5) return 0.0;
  const double guess = boost::math::quantile(boost::math::students_t_distribution<double>(nu), p);
  auto residual = [&](double x) { return t_cdf_1d(x, nu) - p; };
  double r = residual(guess);
  if (r == 0.0) return guess;
  // Bracket the root around the initial guess, then polish with TOMS 748.
  double step = 1e-9 * std::max(1.0, std::abs(guess));
  double lo = guess, hi = guess;
  double rlo = r, rhi = r;
  for (int i = 0; i < 200 && !(rlo <= 0.0 && rhi >= 0.0); ++i) {
    if (rlo > 0.0) {
      lo -= step;
      rlo = residual(lo);
    }
    if (rhi < 0.0) {
      hi += step;
      rhi = residual(hi);
    }
    step *= 2.0;
  }
  if (!(rlo <= 0.0 && rhi >= 0.0)) throw NumericError("t_quantile_1d: failed to bracket root");
  if (rlo == 0.0) return lo;
  if (rhi == 0.0) return hi;
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      residual, lo, hi, rlo, rhi, boost::math::tools::eps_tolerance<double>(52), iters);
  return std::abs(residual(a)) <= std::abs(residual(b)) ? a : b;
}

double t_copula_cdf_quadrature(double u, double v, double nu, double rho) {
  if (u <= 0.0 || v <= 0.0) return 0.0;
  if (u >= 1.0) return std::min(v, 1.0);
  if (v >= 1.0) return u;
  // Integrate over the coordinate with less mass below its quantile.
  if (u > v) std::swap(u, v);
  const double x = t_quantile_1d(u, nu);
  const double y = t_quantile_1d(v, nu);
  const double log_norm =
      std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * std::numbers::pi);
  const double one_minus_r2 = (1.0 - rho) * (1.0 + rho);
  // Y | X = s is rho s + sqrt((nu + s^2)(1 - rho^2)/(nu + 1)) times a t_{nu+1} variable.
  auto integrand = [&](double s) {
    if (!std::isfinite(s)) return 0.0;
    const double scale = std::sqrt((nu + s * s) * one_minus_r2 / (nu + 1.0));
    return t_density(s, nu, log_norm) * t_cdf_1d((y - rho * s) / scale, nu + 1.0);
  };
  numerics::QuadratureOptions opts;
  opts.abs_tol = 1e-14;
  opts.rel_tol = 1e-11;
  try {
    const auto res = numerics::integrate_to(integrand, x, opts);
    return std::clamp(res.value, 0.0, std::min(u, v));
  } catch (const NumericError& e) {
    std::ostringstream msg;
    msg << "t_copula_cdf_quadrature(u=" << u << ", v=" << v << ", nu=" << nu << ", rho=" << rho
        << "): " << e.what();
    throw NumericError(msg.str());
  }
}

namespace {

// P(X < h, Y < k) for a standard bivariate t with integer nu, correlation r
// (Dunnett and Sobel's finite series in the arrangement of Genz's BVTL).
double bivariate_t_integer(int nu, double h, double k, double r) {
  constexpr double pi = std::numbers::pi;
  const double dnu = static_cast<double>(nu);
  const double ors = (1.0 - r) * (1.0 + r);
  const double hrk = h - r * k;
  const double krh = k - r * h;
  double xnhk = 0.0, xnkh = 0.0;
  if (std::abs(hrk) + ors > 0.0) {
    xnhk = hrk * hrk / (hrk * hrk + ors * (dnu + k * k));
    xnkh = krh * krh / (krh * krh + ors * (dnu + h * h));
  }
  const double hs = hrk < 0.0 ? -1.0 : 1.0;
  const double ks = krh < 0.0 ? -1.0 : 1.0;
  double bvt;
  if (nu % 2 == 0) {
    bvt = std::atan2(std::sqrt(ors), -r) / (2.0 * pi);
    double gmph = h / std::sqrt(16.0 * (dnu + h * h));
    double gmpk = k / std::sqrt(16.0 * (dnu + k * k));
    double btnckh = 2.0 * std::atan2(std::sqrt(xnkh), std::sqrt(1.0 - xnkh)) / pi;
    double btpdkh = 2.0 * std::sqrt(xnkh * (1.0 - xnkh)) / pi;
    double btnchk = 2.0 * std::atan2(std::sqrt(xnhk), std::sqrt(1.0 - xnhk)) / pi;
    double btpdhk = 2.0 * std::sqrt(xnhk * (1.0 - xnhk)) / pi;
    for (int j = 1; j <= nu / 2; ++j) {
      const double dj = j;
      bvt += gmph * (1.0 + ks * btnckh);
      bvt += gmpk * (1.0 + hs * btnchk);
      btnckh += btpdkh;
      btpdkh = 2.0 * dj * btpdkh * (1.0 - xnkh) / (2.0 * dj + 1.0);
      btnchk += btpdhk;
      btpdhk = 2.0 * dj * btpdhk * (1.0 - xnhk) / (2.0 * dj + 1.0);
      gmph = gmph * (2.0 * dj - 1.0) / (2.0 * dj * (1.0 + h * h / dnu));
      gmpk = gmpk * (2.0 * dj - 1.0) / (2.0 * dj * (1.0 + k * k / dnu));
    }
  } else {
    const double snu = std::sqrt(dnu);
    const double qhrk = std::sqrt(h * h + k * k - 2.0 * r * h * k + dnu * ors);
    const double hkrn = h * k + r * dnu;
    const double hkn = h * k - dnu;
    const double hpk = h + k;
    bvt = std::atan2(-snu * (hkn * qhrk + hpk * hkrn), hkn * hkrn - dnu * hpk * qhrk) / (2.0 * pi);
    if (bvt < -1e-15) bvt += 1.0;
    double gmph = h / (2.0 * pi * snu * (1.0 + h * h / dnu));
    double gmpk = k / (2.0 * pi * snu * (1.0 + k * k / dnu));
    double btnckh = std::sqrt(xnkh);
    double btpdkh = btnckh;
    double btnchk = std::sqrt(xnhk);
    double btpdhk = btnchk;
    for (int j = 1; j <= (nu - 1) / 2; ++j) {
      const double dj = j;
      bvt += gmph * (1.0 + ks * btnckh);
      bvt += gmpk * (1.0 + hs * btnchk);
      btpdkh = (2.0 * dj - 1.0) * btpdkh * (1.0 - xnkh) / (2.0 * dj);
      btnckh += btpdkh;
      btpdhk = (2.0 * dj - 1.0) * btpdhk * (1.0 - xnhk) / (2.0 * dj);
      btnchk += btpdhk;
      gmph = 2.0 * dj * gmph / ((2.0 * dj + 1.0) * (1.0 + h * h / dnu));
      gmpk = 2.0 * dj * gmpk / ((2.0 * dj + 1.0) * (1.0 + k * k / dnu));
    }
  }
  return bvt;
}

// Below this value the series loses relative accuracy to cancellation and the
// quadrature path is used instead.
constexpr double kSeriesFloor = 1e-6;
constexpr double kMaxSeriesNu = 1000.0;

}  // namespace

double t_copula_cdf(double u, double v, double nu, double rho) {
  if (u <= 0.0 || v <= 0.0) return 0.0;
  if (u >= 1.0) return std::min(v, 1.0);
  if (v >= 1.0) return u;
  if (nu == std::floor(nu) && nu >= 1.0 && nu <= kMaxSeriesNu) {
    const double c = bivariate_t_integer(static_cast<int>(nu), t_quantile_1d(u, nu),
                                         t_quantile_1d(v, nu), rho);
    if (c >= kSeriesFloor)
      return std::clamp(c, std::max(0.0, u + v - 1.0), std::min(u, v));
  }
  return t_copula_cdf_quadrature(u, v, nu, rho);
}

double t_ev_pickands(double t, double nu, double rho) {
  if (t <= 0.0 || t >= 1.0) return 1.0;
  const double scale = std::sqrt(1.0 + nu) / std::sqrt((1.0 - rho) * (1.0 + rho));
  auto z = [&](double s) { return scale * (std::pow(s / (1.0 - s), 1.0 / nu) - rho); };
  return t * t_cdf_1d(z(t), nu + 1.0) + (1.0 - t) * t_cdf_1d(z(1.0 - t), nu + 1.0);
}

double copula_from_pickands(const PickandsFn& a, std::span<const double> u) {
  if (u.size() != a.dim()) throw ConfigError("copula_from_pickands: dimension mismatch");
  double total = 0.0;
  for (double uj : u) {
    if (uj <= 0.0) return 0.0;
    total += std::log(std::min(uj, 1.0));
  }
  if (total == 0.0) return 1.0;
  std::vector<double> t(u.size() - 1);
  for (std::size_t j = 1; j < u.size(); ++j) t[j - 1] = std::log(std::min(u[j], 1.0)) / total;
  return std::exp(total * a(t));
}

// ---------------------------------------------------------------------------
// Sampling

Matrix sample(const CopulaSpec& spec, std::size_t n, Rng& rng) {
  Matrix out(n, spec.dim());
  switch (spec.family()) {
    case CopulaFamily::Independence:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < spec.dim(); ++j) out(i, j) = uniform_open01(rng);
      return out;
    case CopulaFamily::OuterPowerClayton: {
      const double theta = spec.theta(), beta = spec.beta();
      sample_conditional(out, rng,
                         [&](double u, double v) { return opc_partial_u(u, v, theta, beta); });
      return out;
    }
    case CopulaFamily::GumbelHougaard: {
      const double beta = spec.beta();
      sample_conditional(out, rng, [&](double u, double v) { return gumbel_partial_u(u, v, beta); });
      return out;
    }
    case CopulaFamily::PickandsForm:
      if (spec.dim() != 2) throw ConfigError("sampling a Pickands-form copula requires d = 2");
      sample_conditional(out, rng,
                         [&](double u, double v) { return finite_difference_partial_u(spec, u, v); });
      return out;
    case CopulaFamily::TCopula: {
      const double nu = spec.nu(), rho = spec.rho();
      const double rho_c = std::sqrt((1.0 - rho) * (1.0 + rho));
      std::normal_distribution<double> normal;
      std::chi_squared_distribution<double> chi2(nu);
      for (std::size_t i = 0; i < n; ++i) {
        const double z1 = normal(rng);
        const double z2 = normal(rng);
        const double scale = std::sqrt(nu / chi2(rng));
        out(i, 0) = t_cdf_1d(z1 * scale, nu);
        out(i, 1) = t_cdf_1d((rho * z1 + rho_c * z2) * scale, nu);
      }
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tail dependence

double tail_dependence(CopulaFamily family, double param, double nu) {
  switch (family) {
    case CopulaFamily::OuterPowerClayton:
    case CopulaFamily::GumbelHougaard: return 2.0 - std::pow(2.0, 1.0 / param);
    case CopulaFamily::TCopula:
      return 2.0 * t_cdf_1d(-std::sqrt((nu + 1.0) * (1.0 - param) / (1.0 + param)), nu + 1.0);
    case CopulaFamily::Independence: return 0.0;
    default: break;
  }
  throw ConfigError("tail_dependence: unsupported family " + to_string(family));
}

double tdc_to_param(CopulaFamily family, double lambda, std::optional<double> nu) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw DomainError("tail-dependence coefficient must lie in (0, 1), got " + format_double(lambda));
  switch (family) {
    case CopulaFamily::OuterPowerClayton:
    case CopulaFamily::GumbelHougaard: return std::log(2.0) / std::log(2.0 - lambda);
    case CopulaFamily::TCopula: {
      if (!nu || !(*nu > 0.0)) throw ConfigError("tdc_to_param: t copula needs nu > 0");
      const double df = *nu;
      return numerics::bisect_increasing(
          [&](double rho) { return tail_dependence(CopulaFamily::TCopula, rho, df); }, lambda,
          -1.0, 1.0, 1e-15);
    }
    default: break;
  }
  throw ConfigError("tdc_to_param: unsupported family " + to_string(family));
}

}  // namespace blockmax
