// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any fail.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "blockmax/block_empirics.hpp"
#include "blockmax/copula.hpp"
#include "blockmax/csv.hpp"
#include "blockmax/monte_carlo.hpp"
#include "blockmax/moving_maxima.hpp"
#include "blockmax/numerics.hpp"
#include "blockmax/pickands.hpp"
#include "blockmax/random_repetition.hpp"

using namespace blockmax;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
  if (!ok) ++failures;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

// Runs the command-line tool and returns its standard output.
std::string run_tool(const std::string& args, int& status) {
  const std::string cmd = std::string(BLOCKMAX_BINARY) + " " + args;
  std::string out;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  status = ::pclose(pipe);
  return out;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

double sup_over_grid(const std::function<double(double, double)>& f) {
  double s = -1e300;
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) s = std::max(s, f(i / 20.0, j / 20.0));
  return s;
}

// ---------------------------------------------------------------------------

void table1_criterion() {
  Timer timer;
  int status = 0;
  const std::string out = run_tool("table1", status);
  const double secs = timer.seconds();
  if (status != 0) {
    report(false, "table1", "table1 command failed with status " + std::to_string(status));
    return;
  }
  std::istringstream in(out);
  const std::vector<mc::Table1Row> rows = mc::read_table1_csv(in);
  const double expected[6] = {4.62e-2, 1.62e-2, 1.20e-2, 2.86e-2, 2.26e-2, 0.80e-2};
  bool ok = rows.size() == 6 && secs < 60.0;
  std::string detail;
  for (std::size_t i = 0; i < rows.size() && i < 6; ++i) {
    const double dev = std::abs(rows[i].distance - expected[i]);
    ok = ok && dev <= 1e-3;
    detail += to_string(rows[i].family) + "(" + fmt(rows[i].lambda_u) + ")=" + fmt(rows[i].distance) + " ";
  }
  report(ok, "table1", detail + "in " + fmt(secs) + " s");
}

void rate_criterion() {
  const double e1 = mc::rate_sup_error(1.0, 2.0, 1000, 21);
  const double e2 = mc::rate_sup_error(1.0, 2.0, 2000, 21);
  report(e2 <= 0.6 * e1 && e2 <= 5e-3, "drift_rate",
         "sup error m=1000 " + fmt(e1) + ", m=2000 " + fmt(e2) + ", ratio " + fmt(e2 / e1));
}

void sandwich_criterion() {
  const auto process = moving_maxima::MovingMaxConfig::order_one(
      0.25, 0.5, CopulaSpec::outer_power_clayton(1.0, tdc_to_param(CopulaFamily::OuterPowerClayton, 0.5)));
  double worst = 1e300;
  for (std::size_t m : {2u, 5u, 10u, 50u}) {
    const mc::SandwichReport r = mc::sandwich_check(process, m, 21);
    worst = std::min({worst, r.min_lower_slack, r.min_upper_slack});
  }
  report(worst >= -1e-12, "sandwich", "minimum slack over m in {2,5,10,50} and the 21x21 grid: " + fmt(worst));
}

void empirical_copula_criterion() {
  double worst_ratio = 0.0;  // sup-diff / (d/k), must stay <= 1
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t k = 5 + seed % 46;
    Rng rng(10'000 + seed);
    const BlockMaxima bm{sample(CopulaSpec::t_copula(4.0, 0.5), k, rng), 1};
    worst_ratio = std::max(worst_ratio, empirical_copula_sup_difference(bm) * static_cast<double>(k) / 2.0);
  }
  const random_repetition::RepetitionConfig rep(
      0.5, CopulaSpec::outer_power_clayton(1.0, tdc_to_param(CopulaFamily::OuterPowerClayton, 0.5)));
  const std::size_t m = 20, k = 2000;
  double worst_scaled = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(20'000 + seed);
    const BlockMaxima bm = extract_block_maxima(random_repetition::simulate(rep, m * k, rng), m);
    worst_scaled = std::max(worst_scaled, std::sqrt(static_cast<double>(k)) * empirical_copula_sup_difference(bm));
  }
  report(worst_ratio <= 1.0 + 1e-12 && worst_scaled <= 0.5, "empirical_copula_versions",
         "iid: max sup-diff/(d/k) " + fmt(worst_ratio) + "; repetition: max sqrt(k) sup-diff " + fmt(worst_scaled));
}

void estimator_criterion() {
  const numerics::QuadratureOptions plug_opts{1e-11, 0.0, 20000};
  auto weight = [](double y) { return weight_pk(y, 0.5); };
  const std::vector<PickandsFn> targets = {PickandsFn::gumbel(tdc_to_param(CopulaFamily::GumbelHougaard, 0.5)),
                                           PickandsFn::t_ev(4.0, tdc_to_param(CopulaFamily::TCopula, 0.5, 4.0))};
  double plug_err = 0.0;
  for (const PickandsFn& a : targets)
    for (int j = 0; j <= 20; ++j) {
      const double t[1] = {j / 20.0};
      const double got = md_estimate_quadrature([&](std::span<const double> u) { return copula_from_pickands(a, u); },
                                                t, weight, 0.75, std::nullopt, plug_opts);
      plug_err = std::max(plug_err, std::abs(got - a(t[0])));
    }

  const numerics::QuadratureOptions emp_opts{1e-11, 0.0, 200000};
  double exact_err = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t k = 5 + seed % 46;
    Rng rng(30'000 + seed);
    const PseudoObs p = pseudo_observations(BlockMaxima{sample(CopulaSpec::gumbel(1.5), k, rng), 1});
    auto emp = [&](std::span<const double> u) { return empirical_copula(p, u); };
    for (int j = 0; j <= 10; ++j) {
      const double t[1] = {j / 10.0};
      const double q = md_estimate_quadrature(emp, t, weight, 2.0 / 3.0, k, emp_opts);
      exact_err = std::max(exact_err, std::abs(md_estimate_exact(p, t[0], 0.5, 2.0 / 3.0) - q));
    }
  }
  report(plug_err <= 1e-8 && exact_err <= 1e-8, "estimator_identities",
         "plug-in max error " + fmt(plug_err) + "; exact vs quadrature max difference " + fmt(exact_err));
}

void mc_trend_and_determinism_criteria() {
  const fs::path dir = fs::temp_directory_path() / "blockmax_acceptance";
  fs::create_directories(dir);
  const std::string common =
      "mc --model movmax --family opc --lambda 0.5 --a 0.25 --b 0.5 --mode fixed_m --m 30 --k-list 12,48,96,240 "
      "--N 200 --seed 20240601";
  const std::string many = (dir / "jobs8.csv").string();
  const std::string one = (dir / "jobs1.csv").string();

  Timer timer;
  int status = 0;
  run_tool(common + " --jobs 8 --out " + many, status);
  const double secs = timer.seconds();
  if (status != 0) {
    report(false, "mse_trend_in_k", "mc command failed with status " + std::to_string(status));
    report(false, "determinism", "mc command failed");
    return;
  }
  std::ifstream in(many);
  const mc::McSummary s = mc::read_summary_csv(in);
  auto cell = [&](std::size_t k) -> const mc::CellSummary& {
    return *std::find_if(s.cells.begin(), s.cells.end(), [&](const mc::CellSummary& c) { return c.cell.k == k; });
  };
  const double ratio = cell(96).mse_sum / cell(48).mse_sum;
  const bool var_down = cell(12).var_sum > cell(48).var_sum && cell(48).var_sum > cell(240).var_sum;
  report(ratio >= 0.3 && ratio <= 0.7 && var_down && secs <= 600.0, "mse_trend_in_k",
         "MSE_sum(96)/MSE_sum(48) " + fmt(ratio) + "; Var_sum k=12,48,240: " + fmt(cell(12).var_sum) + ", " +
             fmt(cell(48).var_sum) + ", " + fmt(cell(240).var_sum) + "; " + fmt(secs) + " s");

  run_tool(common + " --jobs 1 --out " + one, status);
  auto slurp = [](const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  const std::string a = slurp(many), b = slurp(one);
  report(status == 0 && !a.empty() && a == b, "determinism",
         "--jobs 8 and --jobs 1 summaries (" + std::to_string(a.size()) + " bytes) " +
             (a == b ? "identical" : "differ"));
  fs::remove_all(dir);
}

void axioms_criterion() {
  const std::vector<CopulaSpec> specs = {
      CopulaSpec::outer_power_clayton(1.0, tdc_to_param(CopulaFamily::OuterPowerClayton, 0.25)),
      CopulaSpec::outer_power_clayton(1.0, tdc_to_param(CopulaFamily::OuterPowerClayton, 0.75)),
      CopulaSpec::gumbel(2.0),
      CopulaSpec::t_copula(4.0, tdc_to_param(CopulaFamily::TCopula, 0.5, 4.0)),
      CopulaSpec::t_copula(4.0, -0.5),
      CopulaSpec::pickands(PickandsFn::t_ev(4.0, 0.5))};
  double grounding = 0.0, margin = 0.0, volume = 1.0;
  for (const CopulaSpec& c : specs) {
    grounding = std::max(grounding, sup_over_grid([&](double u, double) { return std::abs(c.cdf(0.0, u)) + std::abs(c.cdf(u, 0.0)); }));
    margin = std::max(margin, sup_over_grid([&](double u, double) {
      return std::max(std::abs(c.cdf(u, 1.0) - u), std::abs(c.cdf(1.0, u) - u));
    }));
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 20; ++j) {
        const double u0 = i / 20.0, u1 = (i + 1) / 20.0, v0 = j / 20.0, v1 = (j + 1) / 20.0;
        volume = std::min(volume, c.cdf(u1, v1) - c.cdf(u1, v0) - c.cdf(u0, v1) + c.cdf(u0, v0));
      }
  }
  const std::vector<PickandsFn> fns = {PickandsFn::gumbel(1.2386), PickandsFn::gumbel(3.1063),
                                       PickandsFn::t_ev(4.0, 0.494), PickandsFn::t_ev(4.0, 0.9557)};
  std::size_t shape_violations = 0;
  const std::vector<double> grid = default_t_grid(1000);
  for (const PickandsFn& a : fns) {
    std::vector<double> values;
    for (double t : grid) values.push_back(a(t));
    const ShapeReport r = shape_check(grid, values);
    shape_violations += r.below_lower.size() + r.above_upper.size() + r.nonconvex.size();
  }
  report(grounding == 0.0 && margin <= 1e-12 && volume >= -1e-12 && shape_violations == 0, "copula_axioms",
         "grounding " + fmt(grounding) + ", margin error " + fmt(margin) + ", min rectangle volume " + fmt(volume) +
             ", Pickands shape violations " + std::to_string(shape_violations));
}

template <class F>
void guarded(const std::string& name, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    report(false, name, std::string("exception: ") + e.what());
  }
}

}  // namespace

int main() {
  guarded("table1", table1_criterion);
  guarded("drift_rate", rate_criterion);
  guarded("sandwich", sandwich_criterion);
  guarded("empirical_copula_versions", empirical_copula_criterion);
  guarded("estimator_identities", estimator_criterion);
  guarded("mse_trend_in_k", mc_trend_and_determinism_criteria);
  guarded("copula_axioms", axioms_criterion);
  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
