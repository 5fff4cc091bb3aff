#pragma once

// Simulation harness: replicated estimation on the moving-maxima and
// random-repetition models, summed bias/variance/MSE summaries, the A_1* versus
// A_inf distance table, and the deterministic diagnostics behind the CLI.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "blockmax/copula.hpp"
#include "blockmax/moving_maxima.hpp"
#include "blockmax/pickands.hpp"
#include "blockmax/random_repetition.hpp"

namespace blockmax::mc {

enum class Model { MovingMax, RandomRepetition };
enum class Mode { FixedN, FixedM };

std::string to_string(Model model);
std::string to_string(Mode mode);
/// "movmax" or "repetition"; throws ConfigError.
Model parse_model(const std::string& name);
/// "fixed_n" or "fixed_m"; throws ConfigError.
Mode parse_mode(const std::string& name);

/// One (n, m, k) combination. k = floor(n / m).
struct Cell {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t k = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

struct ExperimentConfig {
  Model model = Model::MovingMax;
  CopulaFamily family = CopulaFamily::OuterPowerClayton;
  double lambda_u = 0.5;   // upper tail dependence of the innovation / base copula
  double nu = 4.0;         // t copula degrees of freedom
  double opc_theta = 1.0;  // theta of the outer-power Clayton family
  double a = 0.25;         // moving-maxima lag weights (a, 1-a) and (b, 1-b)
  double b = 0.5;
  double rep_theta = 0.5;  // random repetition: probability of a fresh draw

  Mode mode = Mode::FixedM;
  std::size_t n = 1000;               // fixed_n
  std::vector<std::size_t> m_list;    // fixed_n
  std::size_t m = 30;                 // fixed_m
  std::vector<std::size_t> k_list;    // fixed_m

  std::size_t replications = 1000;
  EstimatorConfig estimator;
  bool use_abc = true;
  std::uint64_t master_seed = 1;
  std::size_t jobs = 1;

  /// Throws ConfigError: N >= 2, every cell has k >= 2, m in [1, n].
  void validate() const;
  std::vector<Cell> cells() const;

  /// Innovation (moving maxima) or base (repetition) copula at lambda_u.
  CopulaSpec copula() const;
  /// Pickands function of the limit of the block-maximum copulas.
  PickandsFn target() const;
};

/// Seed of replication rep in cell: a SplitMix64 chain over
/// (master_seed, n, m, k, rep). Independent of the number of workers and of the
/// position of the cell in the list.
std::uint64_t replication_seed(std::uint64_t master_seed, const Cell& cell, std::size_t rep);

/// Estimates on the estimator grid for one simulated path of length cell.n;
/// boundary corrected unless config.use_abc is false.
std::vector<double> run_replication(const ExperimentConfig& config, const Cell& cell,
                                    std::uint64_t rep_seed);

struct CellSummary {
  Cell cell;
  std::size_t replications = 0;
  double b_sum = 0.0;
  double var_sum = 0.0;
  double mse_sum = 0.0;
};

struct McSummary {
  Mode mode = Mode::FixedM;
  std::vector<CellSummary> cells;
};

/// Sums over the interior grid points (0 < t < 1) of the squared bias of the
/// replication mean and of the sample variance (divisor N - 1).
/// estimates[r][j] is replication r at grid point j.
CellSummary summarize(const Cell& cell, const std::vector<std::vector<double>>& estimates,
                      std::span<const double> t_grid, const PickandsFn& target);

/// Runs all cells with config.jobs worker threads. Aggregation is by replication
/// index, so the result does not depend on scheduling.
McSummary run_experiment(const ExperimentConfig& config);

/// Summary CSV: "# key=value" metadata, then
/// mode,n,m,k,N,B_sum,Var_sum,MSE_sum.
void write_summary_csv(std::ostream& os, const McSummary& summary, const ExperimentConfig& config);
McSummary read_summary_csv(std::istream& is);

enum class DistanceMetric { GridRms, Continuous };

struct Table1Row {
  CopulaFamily family = CopulaFamily::OuterPowerClayton;
  double lambda_u = 0.0;
  double param = 0.0;  // beta (OPC) or rho (t)
  double distance = 0.0;
};

struct Table1Config {
  double kappa = 0.5;
  double a = 0.25;
  double b = 0.5;
  double opc_theta = 1.0;
  double nu = 4.0;
  std::vector<CopulaFamily> families = {CopulaFamily::OuterPowerClayton, CopulaFamily::TCopula};
  std::vector<double> lambdas = {0.25, 0.5, 0.75};
  DistanceMetric metric = DistanceMetric::GridRms;
  std::vector<double> t_grid = default_t_grid();
};

/// Distance between A_inf and A_1* for the order-one moving-maxima model, one
/// row per (family, lambda_u).
std::vector<Table1Row> table1(const Table1Config& config = {});

/// Columns family,lambda_U,l2_distance.
void write_table1_csv(std::ostream& os, const std::vector<Table1Row>& rows);
std::vector<Table1Row> read_table1_csv(std::istream& is);

/// sup over a points x points grid on [0,1]^2 of
/// |m {C_{theta/m,beta} - C_{0,beta}} - theta Gamma_beta|, where C_{.,beta} is
/// the outer-power Clayton copula.
double rate_sup_error(double theta, double beta, std::size_t m, std::size_t points = 21);

struct SandwichReport {
  std::size_t m = 0;
  double min_lower_slack = 0.0;  // min over the grid of C_m - lower
  double min_upper_slack = 0.0;  // min over the grid of upper - C_m
};

/// Sandwich bounds of the block-maximum copula checked on a points x points grid.
SandwichReport sandwich_check(const moving_maxima::MovingMaxConfig& config, std::size_t m,
                              std::size_t points = 21);

}  // namespace blockmax::mc
