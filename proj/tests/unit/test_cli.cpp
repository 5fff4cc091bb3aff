#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "blockmax/block_empirics.hpp"
#include "blockmax/cli.hpp"
#include "blockmax/csv.hpp"
#include "blockmax/monte_carlo.hpp"

using namespace blockmax;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("blockmax_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t data_rows(const std::string& text) {
  std::istringstream in(text);
  return csv::read_document(in).rows.size();
}

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const char* value) : name_(name) { ::setenv(name, value, 1); }
  ~ScopedEnv() { ::unsetenv(name_); }

 private:
  const char* name_;
};

}  // namespace

TEST(Cli, NoCommandOrUnknownOptionIsConfigError) {
  EXPECT_EQ(run({}).code, cli::kConfigError);
  EXPECT_EQ(run({"simulate", "--bogus", "1"}).code, cli::kConfigError);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kConfigError);
}

TEST(Cli, InvalidParametersAreConfigErrors) {
  EXPECT_EQ(run({"simulate", "--lambda", "1.5"}).code, cli::kConfigError);
  EXPECT_EQ(run({"simulate", "--family", "frank"}).code, cli::kConfigError);
  EXPECT_EQ(run({"mc", "--k-list", "1", "--N", "2"}).code, cli::kConfigError);
  EXPECT_EQ(run({"check-rate", "--m-list", "2000,1000"}).code, cli::kConfigError);
}

TEST(Cli, MissingInputIsIoError) {
  const Result r = run({"estimate", "--in", "/nonexistent/series.csv", "--m", "5"});
  EXPECT_EQ(r.code, cli::kIoError);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, UnwritableOutputIsIoError) {
  EXPECT_EQ(run({"table1", "--out", "/nonexistent/dir/t.csv"}).code, cli::kIoError);
}

TEST(Cli, SimulateIsDeterministicWithRequestedLength) {
  const Result a = run({"simulate", "--n", "200", "--seed", "17"});
  const Result b = run({"simulate", "--n", "200", "--seed", "17"});
  const Result c = run({"simulate", "--n", "200", "--seed", "18"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  EXPECT_EQ(data_rows(a.out), 200u);
}

TEST(Cli, RepetitionWithThetaOneEqualsIid) {
  const Result rep = run({"simulate", "--model", "repetition", "--rep-theta", "1", "--n", "300", "--seed", "4"});
  const Result iid = run({"simulate", "--model", "iid", "--n", "300", "--seed", "4"});
  ASSERT_EQ(rep.code, 0) << rep.err;
  EXPECT_EQ(rep.out, iid.out);
}

TEST(Cli, BlockmaxAndEstimatePipeline) {
  TempDir dir;
  const std::string series = dir.file("series.csv");
  ASSERT_EQ(run({"simulate", "--n", "1000", "--seed", "3", "--out", series}).code, 0);

  const Result bm = run({"blockmax", "--in", series, "--m", "10", "--pseudo", "--divisor", "k+1"});
  ASSERT_EQ(bm.code, 0) << bm.err;
  EXPECT_EQ(data_rows(bm.out), 100u);

  const Result est = run({"estimate", "--in", series, "--m", "10", "--tgrid", "10"});
  ASSERT_EQ(est.code, 0) << est.err;
  std::istringstream in(est.out);
  const csv::Document doc = csv::read_document(in);
  EXPECT_EQ(doc.metadata.at("abc"), "true");
  EXPECT_EQ(doc.metadata.at("k"), "100");
  EXPECT_EQ(doc.header, (std::vector<std::string>{"t", "A_raw", "A_abc"}));
  ASSERT_EQ(doc.rows.size(), 11u);
  EXPECT_EQ(doc.rows.front()[2], "1");
  EXPECT_EQ(doc.rows.back()[2], "1");

  const Result raw = run({"estimate", "--in", series, "--m", "10", "--no-abc"});
  ASSERT_EQ(raw.code, 0) << raw.err;
  EXPECT_NE(raw.out.find("# abc=false"), std::string::npos);
}

TEST(Cli, EstimateNeedsTwoBlocks) {
  TempDir dir;
  const std::string series = dir.file("series.csv");
  ASSERT_EQ(run({"simulate", "--n", "30", "--seed", "3", "--out", series}).code, 0);
  EXPECT_EQ(run({"estimate", "--in", series, "--m", "20"}).code, cli::kConfigError);
}

TEST(Cli, Table1HasSixRows) {
  const Result r = run({"table1"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  const auto rows = mc::read_table1_csv(in);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_NEAR(rows[0].distance, 0.0462, 1e-3);
}

TEST(Cli, CheckRateDecreases) {
  const Result r = run({"check-rate"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  const csv::Document doc = csv::read_document(in);
  EXPECT_EQ(doc.header, (std::vector<std::string>{"m", "sup_error"}));
  ASSERT_EQ(doc.rows.size(), 2u);
  EXPECT_LT(csv::parse_number(doc.rows[1][1]), csv::parse_number(doc.rows[0][1]));
}

TEST(Cli, SandwichReportsNonNegativeSlack) {
  const Result r = run({"sandwich", "--family", "t"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  const csv::Document doc = csv::read_document(in);
  ASSERT_EQ(doc.rows.size(), 4u);
  for (const auto& row : doc.rows) {
    EXPECT_GE(csv::parse_number(row[1]), -1e-12);
    EXPECT_GE(csv::parse_number(row[2]), -1e-12);
  }
}

TEST(Cli, HelpListsEveryFlag) {
  const Result top = run({"--help"});
  EXPECT_EQ(top.code, 0);
  for (const char* cmd : {"simulate", "blockmax", "estimate", "mc", "table1", "check-rate", "sandwich"})
    EXPECT_NE(top.out.find(cmd), std::string::npos) << cmd;
  const Result mc = run({"mc", "--help"});
  EXPECT_EQ(mc.code, 0);
  for (const char* flag : {"--model", "--family", "--lambda", "--opc-theta", "--nu", "--a", "--b", "--rep-theta",
                           "--mode", "--n", "--m-list", "--m", "--k-list", "--N", "--kappa", "--gamma", "--tgrid",
                           "--abc", "--divisor", "--jobs", "--config", "--seed", "--out"})
    EXPECT_NE(mc.out.find(flag), std::string::npos) << flag;
}

TEST(Cli, SeedFromEnvironmentAndPrecedence) {
  const Result fixed = run({"simulate", "--n", "50", "--seed", "11"});
  {
    ScopedEnv env("BLOCKMAX_SEED", "11");
    EXPECT_EQ(run({"simulate", "--n", "50"}).out, fixed.out);
    EXPECT_NE(run({"simulate", "--n", "50", "--seed", "12"}).out, fixed.out);
  }
  {
    ScopedEnv env("BLOCKMAX_SEED", "11x");
    EXPECT_EQ(run({"simulate", "--n", "50"}).code, cli::kConfigError);
  }
}

TEST(Cli, McConfigFileWithCommandLineOverride) {
  TempDir dir;
  const std::string ini = dir.file("mc.ini");
  {
    std::ofstream f(ini);
    f << "mode = fixed_m\nm = 5\nk_list = 10,20\nN = 4\nrep_theta = 0.7\nmodel = repetition\n";
  }
  const Result from_file = run({"mc", "--config", ini, "--seed", "2"});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  const Result explicit_args =
      run({"mc", "--mode", "fixed_m", "--m", "5", "--k-list", "10,20", "--N", "4", "--rep-theta", "0.7", "--model",
           "repetition", "--seed", "2"});
  EXPECT_EQ(from_file.out, explicit_args.out);
  const Result overridden = run({"mc", "--config", ini, "--N", "3", "--seed", "2"});
  ASSERT_EQ(overridden.code, 0) << overridden.err;
  std::istringstream in(overridden.out);
  const mc::McSummary s = mc::read_summary_csv(in);
  EXPECT_EQ(s.cells.at(0).replications, 3u);

  {
    std::ofstream f(ini);
    f << "unknown_key = 3\n";
  }
  EXPECT_EQ(run({"mc", "--config", ini}).code, cli::kConfigError);
}

TEST(Cli, BinaryWritesFileAndMatchesInProcess) {
  TempDir dir;
  const std::string out = dir.file("sim.csv");
  const std::string cmd = std::string(BLOCKMAX_BINARY) + " simulate --n 100 --seed 9 --out " + out;
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_EQ(slurp(out), run({"simulate", "--n", "100", "--seed", "9"}).out);

  const std::string bad = std::string(BLOCKMAX_BINARY) + " estimate --in /nonexistent.csv --m 2 2>/dev/null";
  const int status = std::system(bad.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), cli::kIoError);
}
