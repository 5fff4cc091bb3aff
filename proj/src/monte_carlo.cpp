#include "blockmax/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <istream>
#include <limits>
#include <ostream>
#include <thread>

#include "blockmax/block_empirics.hpp"
#include "blockmax/csv.hpp"
#include "blockmax/errors.hpp"

namespace blockmax::mc {
namespace {

std::string cell_context(const Cell& cell, std::size_t rep, std::uint64_t seed) {
  return "cell n=" + std::to_string(cell.n) + " m=" + std::to_string(cell.m) +
         " k=" + std::to_string(cell.k) + " rep=" + std::to_string(rep) +
         " seed=" + std::to_string(seed) + ": ";
}

// Re-throws the active exception with a context prefix, keeping its category.
[[noreturn]] void rethrow_with_context(const std::string& context) {
  try {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError(context + e.what());
  } catch (const DomainError& e) {
    throw DomainError(context + e.what());
  } catch (const NumericError& e) {
    throw NumericError(context + e.what());
  } catch (const IoError& e) {
    throw IoError(context + e.what());
  } catch (const std::exception& e) {
    throw NumericError(context + e.what());
  }
}

std::size_t parse_size(const std::string& field) {
  const double x = csv::parse_number(field);
  if (!(x >= 0.0) || x != std::floor(x)) throw IoError("not a non-negative integer: " + field);
  return static_cast<std::size_t>(x);
}

const std::vector<std::string> kSummaryHeader = {"mode", "n", "m", "k", "N",
                                                 "B_sum", "Var_sum", "MSE_sum"};
const std::vector<std::string> kTable1Header = {"family", "lambda_U", "l2_distance"};

CopulaSpec copula_for(CopulaFamily family, double lambda_u, double opc_theta, double nu) {
  switch (family) {
    case CopulaFamily::OuterPowerClayton:
      return CopulaSpec::outer_power_clayton(opc_theta, tdc_to_param(family, lambda_u));
    case CopulaFamily::GumbelHougaard: return CopulaSpec::gumbel(tdc_to_param(family, lambda_u));
    case CopulaFamily::TCopula: return CopulaSpec::t_copula(nu, tdc_to_param(family, lambda_u, nu));
    case CopulaFamily::Independence: return CopulaSpec::independence(2);
    default: break;
  }
  throw ConfigError("family " + to_string(family) + " cannot be set from a tail coefficient");
}

}  // namespace

std::string to_string(Model model) {
  return model == Model::MovingMax ? "movmax" : "repetition";
}

std::string to_string(Mode mode) { return mode == Mode::FixedN ? "fixed_n" : "fixed_m"; }

Model parse_model(const std::string& name) {
  if (name == "movmax") return Model::MovingMax;
  if (name == "repetition") return Model::RandomRepetition;
  throw ConfigError("unknown model '" + name + "' (expected movmax, repetition)");
}

Mode parse_mode(const std::string& name) {
  if (name == "fixed_n") return Mode::FixedN;
  if (name == "fixed_m") return Mode::FixedM;
  throw ConfigError("unknown mode '" + name + "' (expected fixed_n, fixed_m)");
}

void ExperimentConfig::validate() const {
  if (replications < 2) throw ConfigError("at least two replications are required");
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
  estimator.validate();
  if (family == CopulaFamily::Independence) {
    if (lambda_u != 0.0) throw ConfigError("independence has lambda_u = 0");
  } else if (!(lambda_u > 0.0 && lambda_u < 1.0)) {
    throw ConfigError("lambda_u must lie in (0, 1)");
  }
  if (model == Model::MovingMax && !(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0))
    throw ConfigError("lag weights a and b must lie in [0, 1]");
  if (model == Model::RandomRepetition && !(rep_theta > 0.0 && rep_theta <= 1.0))
    throw ConfigError("rep_theta must lie in (0, 1]");
  if (mode == Mode::FixedN) {
    if (m_list.empty()) throw ConfigError("fixed_n mode needs a non-empty m list");
    for (std::size_t mm : m_list)
      if (mm < 1 || mm > n) throw ConfigError("block length " + std::to_string(mm) + " outside [1, n]");
  } else {
    if (k_list.empty()) throw ConfigError("fixed_m mode needs a non-empty k list");
    if (m < 1) throw ConfigError("block length must be at least 1");
  }
  for (const Cell& c : cells())
    if (c.k < 2)
      throw ConfigError("cell m=" + std::to_string(c.m) + " has k=" + std::to_string(c.k) +
                        " blocks; at least 2 are required");
  (void)copula();
}

std::vector<Cell> ExperimentConfig::cells() const {
  std::vector<Cell> out;
  if (mode == Mode::FixedN) {
    for (std::size_t mm : m_list) out.push_back({n, mm, mm ? n / mm : 0});
  } else {
    for (std::size_t kk : k_list) out.push_back({m * kk, m, kk});
  }
  return out;
}

CopulaSpec ExperimentConfig::copula() const { return copula_for(family, lambda_u, opc_theta, nu); }

PickandsFn ExperimentConfig::target() const { return copula().attractor_pickands(); }

std::uint64_t replication_seed(std::uint64_t master_seed, const Cell& cell, std::size_t rep) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ cell.n);
  h = splitmix64(h ^ cell.m);
  h = splitmix64(h ^ cell.k);
  return splitmix64(h ^ rep);
}

std::vector<double> run_replication(const ExperimentConfig& config, const Cell& cell,
                                    std::uint64_t rep_seed) {
  if (cell.k < 2) throw ConfigError("at least 2 blocks are required");
  if (cell.m * cell.k > cell.n) throw ConfigError("cell has fewer than m k observations");
  Rng rng(rep_seed);
  Series series;
  if (config.model == Model::MovingMax) {
    const auto process = moving_maxima::MovingMaxConfig::order_one(config.a, config.b, config.copula());
    series = moving_maxima::simulate(process, cell.n, rng);
  } else {
    const random_repetition::RepetitionConfig process(config.rep_theta, config.copula());
    series = random_repetition::simulate(process, cell.n, rng);
  }
  const BlockMaxima bm = extract_block_maxima(series, cell.m);
  const PickandsEstimate est =
      estimate_pickands(pseudo_observations(bm, config.estimator.divisor), config.estimator);
  return config.use_abc ? est.corrected : est.raw;
}

CellSummary summarize(const Cell& cell, const std::vector<std::vector<double>>& estimates,
                      std::span<const double> t_grid, const PickandsFn& target) {
  const std::size_t reps = estimates.size();
  if (reps < 2) throw DomainError("at least two replications are required");
  for (const auto& e : estimates)
    if (e.size() != t_grid.size()) throw DomainError("estimate length differs from the grid");
  CellSummary s{cell, reps, 0.0, 0.0, 0.0};
  const double nr = static_cast<double>(reps);
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    const double t = t_grid[j];
    if (!(t > 0.0 && t < 1.0)) continue;
    double mean = 0.0;
    for (std::size_t r = 0; r < reps; ++r) mean += estimates[r][j];
    mean /= nr;
    double ss = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      const double d = estimates[r][j] - mean;
      ss += d * d;
    }
    const double bias = mean - target(t);
    s.b_sum += bias * bias;
    s.var_sum += ss / (nr - 1.0);
  }
  s.mse_sum = s.b_sum + s.var_sum;
  return s;
}

McSummary run_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::vector<Cell> cells = config.cells();
  const std::size_t reps = config.replications;
  const std::size_t total = cells.size() * reps;

  std::vector<std::vector<double>> results(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};

  auto worker = [&] {
    for (std::size_t task = next++; task < total && !failed; task = next++) {
      const Cell& cell = cells[task / reps];
      const std::size_t rep = task % reps;
      const std::uint64_t seed = replication_seed(config.master_seed, cell, rep);
      try {
        try {
          results[task] = run_replication(config, cell, seed);
        } catch (...) {
          rethrow_with_context(cell_context(cell, rep, seed));
        }
      } catch (...) {
        errors[task] = std::current_exception();
        failed = true;
      }
    }
  };

  const std::size_t workers = std::min(config.jobs, std::max<std::size_t>(total, 1));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  const PickandsFn target = config.target();
  McSummary summary{config.mode, {}};
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::vector<std::vector<double>> block(
        std::make_move_iterator(results.begin() + static_cast<std::ptrdiff_t>(c * reps)),
        std::make_move_iterator(results.begin() + static_cast<std::ptrdiff_t>((c + 1) * reps)));
    summary.cells.push_back(summarize(cells[c], block, config.estimator.t_grid, target));
  }
  return summary;
}

void write_summary_csv(std::ostream& os, const McSummary& summary, const ExperimentConfig& config) {
  using csv::format_number;
  const CopulaSpec spec = config.copula();
  os << "# model=" << to_string(config.model) << '\n'
     << "# family=" << to_string(config.family) << '\n'
     << "# lambda_U=" << format_number(config.lambda_u) << '\n';
  switch (config.family) {
    case CopulaFamily::OuterPowerClayton:
      os << "# theta=" << format_number(spec.theta()) << "\n# beta=" << format_number(spec.beta()) << '\n';
      break;
    case CopulaFamily::GumbelHougaard: os << "# beta=" << format_number(spec.beta()) << '\n'; break;
    case CopulaFamily::TCopula:
      os << "# nu=" << format_number(spec.nu()) << "\n# rho=" << format_number(spec.rho()) << '\n';
      break;
    default: break;
  }
  if (config.model == Model::MovingMax)
    os << "# a=" << format_number(config.a) << "\n# b=" << format_number(config.b) << '\n';
  else
    os << "# rep_theta=" << format_number(config.rep_theta) << '\n';
  os << "# kappa=" << format_number(config.estimator.kappa) << '\n'
     << "# gamma=" << format_number(config.estimator.gamma) << '\n'
     << "# divisor=" << (config.estimator.divisor == Divisor::K ? "k" : "k+1") << '\n'
     << "# abc=" << (config.use_abc ? "true" : "false") << '\n'
     << "# t_points=" << config.estimator.t_grid.size() << '\n'
     << "# master_seed=" << config.master_seed << '\n';
  for (std::size_t i = 0; i < kSummaryHeader.size(); ++i) os << (i ? "," : "") << kSummaryHeader[i];
  os << '\n';
  for (const CellSummary& c : summary.cells) {
    os << to_string(summary.mode) << ',' << c.cell.n << ',' << c.cell.m << ',' << c.cell.k << ','
       << c.replications << ',' << format_number(c.b_sum) << ',' << format_number(c.var_sum) << ','
       << format_number(c.mse_sum) << '\n';
  }
  if (!os) throw IoError("write failed");
}

McSummary read_summary_csv(std::istream& is) {
  const csv::Document doc = csv::read_document(is);
  if (doc.header != kSummaryHeader) throw IoError("summary CSV header mismatch");
  McSummary out;
  for (std::size_t r = 0; r < doc.rows.size(); ++r) {
    const auto& row = doc.rows[r];
    const Mode mode = [&] {
      try {
        return parse_mode(row[0]);
      } catch (const ConfigError& e) {
        throw IoError(e.what());
      }
    }();
    if (r == 0) out.mode = mode;
    else if (mode != out.mode) throw IoError("summary CSV mixes modes");
    CellSummary c;
    c.cell = {parse_size(row[1]), parse_size(row[2]), parse_size(row[3])};
    c.replications = parse_size(row[4]);
    c.b_sum = csv::parse_number(row[5]);
    c.var_sum = csv::parse_number(row[6]);
    c.mse_sum = csv::parse_number(row[7]);
    out.cells.push_back(c);
  }
  return out;
}

std::vector<Table1Row> table1(const Table1Config& config) {
  std::vector<Table1Row> rows;
  for (CopulaFamily family : config.families) {
    for (double lambda : config.lambdas) {
      const CopulaSpec innovation = copula_for(family, lambda, config.opc_theta, config.nu);
      const auto process = moving_maxima::MovingMaxConfig::order_one(config.a, config.b, innovation);
      const PickandsFn a_inf = innovation.attractor_pickands();
      auto c1 = [&](double u, double v) {
        const double pt[2] = {u, v};
        return moving_maxima::closed_form_c1(process, pt);
      };
      auto a_star = [&](double t) { return a1_star(c1, t, config.kappa); };
      auto a_limit = [&](double t) { return a_inf(t); };
      Table1Row row;
      row.family = family;
      row.lambda_u = lambda;
      row.param = family == CopulaFamily::TCopula ? innovation.rho() : innovation.beta();
      row.distance = config.metric == DistanceMetric::GridRms
                         ? grid_l2_distance(config.t_grid, a_star, a_limit)
                         : l2_distance(a_star, a_limit, 1e-10);
      rows.push_back(row);
    }
  }
  return rows;
}

void write_table1_csv(std::ostream& os, const std::vector<Table1Row>& rows) {
  os << "family,lambda_U,l2_distance\n";
  for (const Table1Row& r : rows)
    os << to_string(r.family) << ',' << csv::format_number(r.lambda_u) << ','
       << csv::format_number(r.distance) << '\n';
  if (!os) throw IoError("write failed");
}

std::vector<Table1Row> read_table1_csv(std::istream& is) {
  const csv::Document doc = csv::read_document(is);
  if (doc.header != kTable1Header) throw IoError("table CSV header mismatch");
  std::vector<Table1Row> rows;
  for (const auto& f : doc.rows) {
    Table1Row r;
    try {
      r.family = parse_family(f[0]);
    } catch (const ConfigError& e) {
      throw IoError(e.what());
    }
    r.lambda_u = csv::parse_number(f[1]);
    r.distance = csv::parse_number(f[2]);
    rows.push_back(r);
  }
  return rows;
}

double rate_sup_error(double theta, double beta, std::size_t m, std::size_t points) {
  if (m < 1) throw DomainError("m must be at least 1");
  if (points < 2) throw DomainError("grid needs at least two points");
  if (!(theta > 0.0)) throw DomainError("theta must be positive");
  const double md = static_cast<double>(m);
  double sup = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(points - 1);
    for (std::size_t j = 0; j < points; ++j) {
      const double v = static_cast<double>(j) / static_cast<double>(points - 1);
      const double diff = opc_cdf(u, v, theta / md, beta) - gumbel_cdf(u, v, beta);
      sup = std::max(sup, std::abs(md * diff - theta * gamma_beta_drift(u, v, beta)));
    }
  }
  return sup;
}

SandwichReport sandwich_check(const moving_maxima::MovingMaxConfig& config, std::size_t m,
                              std::size_t points) {
  if (points < 2) throw DomainError("grid needs at least two points");
  SandwichReport report{m, std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::infinity()};
  double u[2];
  for (std::size_t i = 0; i < points; ++i) {
    u[0] = static_cast<double>(i) / static_cast<double>(points - 1);
    for (std::size_t j = 0; j < points; ++j) {
      u[1] = static_cast<double>(j) / static_cast<double>(points - 1);
      const double cm = moving_maxima::closed_form_cm(config, m, u);
      const auto [lower, upper] = moving_maxima::sandwich_bounds(config, m, u);
      report.min_lower_slack = std::min(report.min_lower_slack, cm - lower);
      report.min_upper_slack = std::min(report.min_upper_slack, upper - cm);
    }
  }
  return report;
}

}  // namespace blockmax::mc
