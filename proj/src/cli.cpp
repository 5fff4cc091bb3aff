#include "blockmax/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>

#include "blockmax/block_empirics.hpp"
#include "blockmax/copula.hpp"
#include "blockmax/csv.hpp"
#include "blockmax/errors.hpp"
#include "blockmax/monte_carlo.hpp"
#include "blockmax/moving_maxima.hpp"
#include "blockmax/pickands.hpp"
#include "blockmax/random_repetition.hpp"

namespace blockmax::cli {
namespace {

struct Common {
  std::uint64_t seed = 1;
  std::string out = "-";
};

// Opens --out lazily, "-" meaning the caller's stream.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : path_(path), fallback_(fallback) {}

  std::ostream& stream() {
    if (path_ == "-") return fallback_;
    if (!file_) {
      file_ = std::make_unique<std::ofstream>(path_, std::ios::binary);
      if (!*file_) throw IoError("cannot open '" + path_ + "' for writing");
    }
    return *file_;
  }

  void finish() {
    std::ostream& os = stream();
    os.flush();
    if (!os) throw IoError("write to '" + path_ + "' failed");
  }

 private:
  std::string path_;
  std::ostream& fallback_;
  std::unique_ptr<std::ofstream> file_;
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--seed", common.seed, "Master seed of the random generator")
      ->capture_default_str();
  cmd->add_option("--out", common.out, "Output file, '-' for standard output")
      ->capture_default_str();
}

Series read_series_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return read_series_csv(in);
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

Divisor parse_divisor(const std::string& s) {
  if (s == "k") return Divisor::K;
  if (s == "k+1") return Divisor::KPlusOne;
  throw ConfigError("divisor must be 'k' or 'k+1'");
}

struct ModelOptions {
  std::string model = "movmax";
  std::string family = "opc";
  double lambda = 0.5;
  double opc_theta = 1.0;
  double nu = 4.0;
  double a = 0.25;
  double b = 0.5;
  double rep_theta = 0.5;
};

void add_model_options(CLI::App* cmd, ModelOptions& o, bool with_iid) {
  cmd->add_option("--model", o.model,
                  with_iid ? "Process: movmax, repetition or iid" : "Process: movmax or repetition")
      ->capture_default_str();
  cmd->add_option("--family", o.family, "Innovation copula: opc, gumbel, t or independence")
      ->capture_default_str();
  cmd->add_option("--lambda", o.lambda, "Upper tail-dependence coefficient of the copula")
      ->capture_default_str();
  cmd->add_option("--opc-theta", o.opc_theta, "theta of the outer-power Clayton family")
      ->capture_default_str();
  cmd->add_option("--nu", o.nu, "Degrees of freedom of the t copula")->capture_default_str();
  cmd->add_option("--a", o.a, "Moving maxima: lag weights (a, 1-a) of component 1")
      ->capture_default_str();
  cmd->add_option("--b", o.b, "Moving maxima: lag weights (b, 1-b) of component 2")
      ->capture_default_str();
  cmd->add_option("--rep-theta", o.rep_theta, "Random repetition: probability of a fresh draw")
      ->capture_default_str();
}

mc::ExperimentConfig model_config(const ModelOptions& o) {
  mc::ExperimentConfig c;
  c.model = mc::parse_model(o.model);
  c.family = parse_family(o.family);
  c.lambda_u = c.family == CopulaFamily::Independence ? 0.0 : o.lambda;
  c.opc_theta = o.opc_theta;
  c.nu = o.nu;
  c.a = o.a;
  c.b = o.b;
  c.rep_theta = o.rep_theta;
  return c;
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("BLOCKMAX_SEED");
  if (!s || !*s) return std::nullopt;
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos, 10);
    if (pos != std::string(s).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string("BLOCKMAX_SEED is not an unsigned integer: ") + s);
  }
}

// Fills options of cmd that were not given on the command line from a flat
// key=value file.
void apply_config_file(CLI::App* cmd, const std::string& path) {
  std::ifstream probe(path);
  if (!probe) throw ConfigError("cannot open config file '" + path + "'");
  const auto items = CLI::ConfigINI().from_file(path);
  for (const CLI::ConfigItem& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    if (!item.parents.empty()) throw ConfigError("config file must be flat (no sections): " + path);
    std::string key = item.name;
    std::replace(key.begin(), key.end(), '_', '-');
    CLI::Option* op = cmd->get_option_no_throw("--" + key);
    if (op == nullptr || key == "config")
      throw ConfigError("unknown config key '" + item.name + "' in " + path);
    if (op->count() > 0) continue;
    op->add_result(item.inputs);
    op->run_callback();
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Block-maxima copula simulation and Pickands dependence estimation"};
  app.name("blockmax");
  app.require_subcommand(1);

  Common common;
  ModelOptions model;

  // simulate
  std::size_t sim_n = 1000;
  auto* sim = app.add_subcommand("simulate", "Simulate a bivariate series on the copula scale");
  add_model_options(sim, model, true);
  sim->add_option("--n", sim_n, "Number of observations")->capture_default_str();
  add_common(sim, common);

  // blockmax
  std::string bm_in;
  std::size_t bm_m = 0;
  bool bm_pseudo = false;
  std::string bm_divisor = "k";
  auto* blk = app.add_subcommand("blockmax", "Extract block maxima or pseudo-observations");
  blk->add_option("--in", bm_in, "Series CSV")->required();
  blk->add_option("--m", bm_m, "Block length")->required();
  blk->add_flag("--pseudo", bm_pseudo, "Write rank pseudo-observations instead of raw maxima");
  blk->add_option("--divisor", bm_divisor, "Rank normaliser for --pseudo: k or k+1")
      ->capture_default_str();
  add_common(blk, common);

  // estimate
  std::string est_in;
  std::size_t est_m = 0;
  double est_kappa = 0.5;
  double est_gamma = 2.0 / 3.0;
  std::size_t est_tgrid = 20;
  bool est_abc = true;
  std::string est_divisor = "k";
  auto* est = app.add_subcommand("estimate", "Estimate the Pickands function from a series");
  est->add_option("--in", est_in, "Series CSV")->required();
  est->add_option("--m", est_m, "Block length")->required();
  est->add_option("--kappa", est_kappa, "Weight exponent kappa")->capture_default_str();
  est->add_option("--gamma", est_gamma, "Truncation exponent gamma")->capture_default_str();
  est->add_option("--tgrid", est_tgrid, "Number of intervals of the grid j/tgrid on [0,1]")
      ->capture_default_str();
  est->add_flag("--abc,!--no-abc", est_abc, "Apply the additive boundary correction (default on)");
  est->add_option("--divisor", est_divisor, "Rank normaliser: k or k+1")->capture_default_str();
  add_common(est, common);

  // mc
  ModelOptions mc_model;
  std::string mc_mode = "fixed_m";
  std::size_t mc_n = 1000;
  std::vector<std::size_t> mc_m_list;
  std::size_t mc_m = 30;
  std::vector<std::size_t> mc_k_list;
  std::size_t mc_reps = 1000;
  double mc_kappa = 0.5;
  double mc_gamma = 2.0 / 3.0;
  std::size_t mc_tgrid = 20;
  bool mc_abc = true;
  std::string mc_divisor = "k";
  std::size_t mc_jobs = 1;
  auto* mcc = app.add_subcommand("mc", "Monte Carlo bias/variance/MSE summaries");
  std::string mc_config;
  mcc->add_option("--config", mc_config,
                  "Flat key=value file; keys are long option names without dashes "
                  "(k-list or k_list); command-line options take precedence");
  add_model_options(mcc, mc_model, false);
  mcc->add_option("--mode", mc_mode, "fixed_n or fixed_m")->capture_default_str();
  mcc->add_option("--n", mc_n, "fixed_n: series length")->capture_default_str();
  mcc->add_option("--m-list", mc_m_list, "fixed_n: block lengths")->delimiter(',');
  mcc->add_option("--m", mc_m, "fixed_m: block length")->capture_default_str();
  mcc->add_option("--k-list", mc_k_list, "fixed_m: numbers of blocks")->delimiter(',');
  mcc->add_option("--N", mc_reps, "Replications per cell")->capture_default_str();
  mcc->add_option("--kappa", mc_kappa, "Weight exponent kappa")->capture_default_str();
  mcc->add_option("--gamma", mc_gamma, "Truncation exponent gamma")->capture_default_str();
  mcc->add_option("--tgrid", mc_tgrid, "Number of intervals of the grid j/tgrid on [0,1]")
      ->capture_default_str();
  mcc->add_flag("--abc,!--no-abc", mc_abc, "Apply the additive boundary correction (default on)");
  mcc->add_option("--divisor", mc_divisor, "Rank normaliser: k or k+1")->capture_default_str();
  mcc->add_option("--jobs", mc_jobs, "Worker threads; results do not depend on it")
      ->capture_default_str();
  add_common(mcc, common);

  // table1
  std::string t1_metric = "grid";
  double t1_kappa = 0.5;
  auto* t1 = app.add_subcommand("table1", "Distances between A_inf and A_1* for the order-one model");
  t1->add_option("--metric", t1_metric,
                 "grid: root mean square over t = j/20; continuous: L2 norm on [0,1]")
      ->capture_default_str();
  t1->add_option("--kappa", t1_kappa, "Weight exponent kappa")->capture_default_str();
  add_common(t1, common);

  // check-rate
  double cr_theta = 1.0;
  double cr_beta = 2.0;
  std::vector<std::size_t> cr_m_list = {1000, 2000};
  std::size_t cr_grid = 21;
  auto* cr = app.add_subcommand(
      "check-rate", "sup-grid error of m{C_{theta/m,beta} - C_{0,beta}} against theta Gamma_beta");
  cr->add_option("--theta", cr_theta, "theta")->capture_default_str();
  cr->add_option("--beta", cr_beta, "beta >= 1")->capture_default_str();
  cr->add_option("--m-list", cr_m_list, "Ascending values of m")->delimiter(',')->capture_default_str();
  cr->add_option("--grid", cr_grid, "Grid points per axis")->capture_default_str();
  add_common(cr, common);

  // sandwich
  ModelOptions sw_model;
  std::vector<std::size_t> sw_m_list = {2, 5, 10, 50};
  std::size_t sw_grid = 21;
  auto* sw = app.add_subcommand("sandwich", "Check the block-maximum copula bounds of the order-one model");
  sw->add_option("--family", sw_model.family, "Innovation copula: opc, gumbel, t or independence")
      ->capture_default_str();
  sw->add_option("--lambda", sw_model.lambda, "Upper tail-dependence coefficient")->capture_default_str();
  sw->add_option("--opc-theta", sw_model.opc_theta, "theta of the outer-power Clayton family")
      ->capture_default_str();
  sw->add_option("--nu", sw_model.nu, "Degrees of freedom of the t copula")->capture_default_str();
  sw->add_option("--a", sw_model.a, "Lag weights (a, 1-a) of component 1")->capture_default_str();
  sw->add_option("--b", sw_model.b, "Lag weights (b, 1-b) of component 2")->capture_default_str();
  sw->add_option("--m-list", sw_m_list, "Block lengths, each > 1")->delimiter(',')->capture_default_str();
  sw->add_option("--grid", sw_grid, "Grid points per axis")->capture_default_str();
  add_common(sw, common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  if (*mcc && !mc_config.empty()) {
    try {
      apply_config_file(mcc, mc_config);
    } catch (const CLI::Error& e) {
      err << "configuration error: " << mc_config << ": " << e.what() << '\n';
      return kConfigError;
    } catch (const ConfigError& e) {
      err << "configuration error: " << e.what() << '\n';
      return kConfigError;
    }
  }

  try {
    // --seed beats BLOCKMAX_SEED, which beats the built-in default.
    for (const CLI::App* sub : app.get_subcommands())
      if (sub->count("--seed") == 0)
        if (const auto s = env_seed()) common.seed = *s;
    Output output(common.out, out);
    using csv::format_number;

    if (*sim) {
      if (sim_n < 1) throw ConfigError("n must be at least 1");
      Rng rng(common.seed);
      Series series;
      if (model.model == "iid") {
        series = sample(model_config({"movmax", model.family, model.lambda, model.opc_theta, model.nu,
                                      model.a, model.b, model.rep_theta})
                            .copula(),
                        sim_n, rng);
      } else {
        const mc::ExperimentConfig c = model_config(model);
        if (c.model == mc::Model::MovingMax)
          series = moving_maxima::simulate(
              moving_maxima::MovingMaxConfig::order_one(c.a, c.b, c.copula()), sim_n, rng);
        else
          series = random_repetition::simulate(
              random_repetition::RepetitionConfig(c.rep_theta, c.copula()), sim_n, rng);
      }
      write_series_csv(output.stream(), series);
    } else if (*blk) {
      const BlockMaxima bm = extract_block_maxima(read_series_file(bm_in), bm_m);
      if (bm_pseudo)
        write_pseudo_obs_csv(output.stream(), pseudo_observations(bm, parse_divisor(bm_divisor)), bm.m);
      else
        write_block_maxima_csv(output.stream(), bm);
    } else if (*est) {
      const Series series = read_series_file(est_in);
      if (series.cols() != 2) throw ConfigError("estimate expects a bivariate series");
      if (est_m < 1 || series.rows() < 2 * est_m)
        throw ConfigError("need n >= 2m (n=" + std::to_string(series.rows()) + ", m=" +
                          std::to_string(est_m) + ")");
      EstimatorConfig cfg;
      cfg.kappa = est_kappa;
      cfg.gamma = est_gamma;
      cfg.divisor = parse_divisor(est_divisor);
      cfg.t_grid = default_t_grid(est_tgrid);
      const BlockMaxima bm = extract_block_maxima(series, est_m);
      PickandsEstimate e = estimate_pickands(pseudo_observations(bm, cfg.divisor), cfg);
      if (!est_abc) e.corrected = e.raw;
      output.stream() << "# abc=" << (est_abc ? "true" : "false") << '\n';
      write_estimate_csv(output.stream(), e, bm.m, bm.k());
    } else if (*mcc) {
      mc::ExperimentConfig c = model_config(mc_model);
      c.mode = mc::parse_mode(mc_mode);
      c.n = mc_n;
      c.m_list = mc_m_list;
      c.m = mc_m;
      c.k_list = mc_k_list;
      c.replications = mc_reps;
      c.estimator.kappa = mc_kappa;
      c.estimator.gamma = mc_gamma;
      c.estimator.divisor = parse_divisor(mc_divisor);
      c.estimator.t_grid = default_t_grid(mc_tgrid);
      c.use_abc = mc_abc;
      c.jobs = mc_jobs;
      c.master_seed = common.seed;
      const mc::McSummary summary = mc::run_experiment(c);
      mc::write_summary_csv(output.stream(), summary, c);
    } else if (*t1) {
      mc::Table1Config c;
      c.kappa = t1_kappa;
      if (t1_metric == "grid") c.metric = mc::DistanceMetric::GridRms;
      else if (t1_metric == "continuous") c.metric = mc::DistanceMetric::Continuous;
      else throw ConfigError("metric must be 'grid' or 'continuous'");
      mc::write_table1_csv(output.stream(), mc::table1(c));
    } else if (*cr) {
      if (cr_m_list.empty()) throw ConfigError("m list is empty");
      if (!std::is_sorted(cr_m_list.begin(), cr_m_list.end()))
        throw ConfigError("m list must be ascending");
      std::ostream& os = output.stream();
      os << "# theta=" << format_number(cr_theta) << "\n# beta=" << format_number(cr_beta)
         << "\n# grid=" << cr_grid << "\nm,sup_error\n";
      for (std::size_t m : cr_m_list)
        os << m << ',' << format_number(mc::rate_sup_error(cr_theta, cr_beta, m, cr_grid)) << '\n';
    } else if (*sw) {
      const mc::ExperimentConfig c = model_config(sw_model);
      const auto process = moving_maxima::MovingMaxConfig::order_one(c.a, c.b, c.copula());
      std::ostream& os = output.stream();
      os << "# family=" << sw_model.family << "\n# lambda_U=" << format_number(c.lambda_u)
         << "\n# a=" << format_number(c.a) << "\n# b=" << format_number(c.b) << "\n# grid=" << sw_grid
         << "\nm,min_lower_slack,min_upper_slack\n";
      for (std::size_t m : sw_m_list) {
        if (m <= process.order()) throw ConfigError("sandwich bounds need m > 1");
        const mc::SandwichReport r = mc::sandwich_check(process, m, sw_grid);
        os << m << ',' << format_number(r.min_lower_slack) << ',' << format_number(r.min_upper_slack)
           << '\n';
      }
    }
    output.finish();
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumericError;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  }
  return kOk;
}

}  // namespace blockmax::cli
