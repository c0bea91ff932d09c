#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "mnemosim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = mnemosim::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string src(const std::string& rel) { return std::string(MNEMOSIM_SOURCE_DIR) + "/" + rel; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the real binary so stdout/stderr separation and exit status are checked end to end.
Outcome spawn(const std::string& args) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto out_path = dir / ("mnemosim_out_" + std::to_string(::getpid()));
  const auto err_path = dir / ("mnemosim_err_" + std::to_string(::getpid()));
  const std::string cmd = std::string("\"") + MNEMOSIM_CLI_PATH + "\" " + args + " >" + out_path.string() + " 2>" +
                          err_path.string();
  const int status = std::system(cmd.c_str());
  Outcome o{WEXITSTATUS(status), slurp(out_path), slurp(err_path)};
  std::filesystem::remove(out_path);
  std::filesystem::remove(err_path);
  return o;
}

}  // namespace

TEST(Cli, ValidateGoodScenario) {
  const auto o = invoke({"validate", src("tests/fixtures/good.json")});
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.out, "OK\n");
  EXPECT_EQ(o.err, "");
}

TEST(Cli, SimulateBadScenarioNamesField) {
  const auto o = invoke({"simulate", src("tests/fixtures/bad_tau_e.json")});
  EXPECT_EQ(o.code, 1);
  EXPECT_EQ(o.out, "");
  EXPECT_NE(o.err.find("params.tau_e"), std::string::npos) << o.err;
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({"simulate"}).code, 2);
  EXPECT_EQ(invoke({"simulate", src("scenarios/demo.json"), "--format", "xml"}).code, 2);
  EXPECT_EQ(invoke({"simulate", src("scenarios/demo.json"), "--seed", "abc"}).code, 2);
  EXPECT_EQ(invoke({"latency", src("scenarios/demo.json")}).code, 2);
}

TEST(Cli, MissingFileIsADomainError) {
  const auto o = invoke({"validate", src("tests/fixtures/does_not_exist.json")});
  EXPECT_EQ(o.code, 1);
  EXPECT_FALSE(o.err.empty());
}

TEST(Cli, SimulateMatchesGoldenAndIsRepeatable) {
  const auto a = invoke({"simulate", src("scenarios/demo.json"), "--seed", "42", "--format", "csv"});
  const auto b = invoke({"simulate", src("scenarios/demo.json"), "--seed", "42", "--format", "csv"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, slurp(src("tests/golden/demo_seed42.csv")));
}

TEST(Cli, BinaryOutputIsByteIdentical) {
  const std::string args = "simulate \"" + src("scenarios/demo.json") + "\" --seed 42 --format json";
  const auto a = spawn(args);
  const auto b = spawn(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.err, "");
  EXPECT_EQ(a.out, b.out);
  std::istringstream lines(a.out);
  for (std::string line; std::getline(lines, line);) EXPECT_TRUE(nlohmann::json::accept(line)) << line;
}

TEST(Cli, BinaryExitCodes) {
  EXPECT_EQ(spawn("validate \"" + src("tests/fixtures/good.json") + "\"").code, 0);
  EXPECT_EQ(spawn("validate \"" + src("tests/fixtures/bad_tau_e.json") + "\"").code, 1);
  EXPECT_EQ(spawn("--bogus").code, 2);
}

TEST(Cli, OverridesTakePrecedence) {
  const auto o = invoke({"simulate", src("scenarios/demo.json"), "--horizon", "3"});
  ASSERT_EQ(o.code, 0);
  std::istringstream lines(o.out);
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) EXPECT_LE(std::stod(line.substr(0, line.find(','))), 3.0);

  const auto seeded = [](const char* seed) {
    return invoke({"simulate", src("scenarios/demo.json"), "--stochastic", "--seed", seed}).out;
  };
  EXPECT_EQ(seeded("7"), seeded("7"));
  EXPECT_NE(seeded("7"), seeded("8"));

  const auto bad_dt = invoke({"simulate", src("scenarios/demo.json"), "--dt", "0"});
  EXPECT_EQ(bad_dt.code, 1);
  EXPECT_NE(bad_dt.err.find("dt"), std::string::npos);
}

TEST(Cli, OutputFileReceivesResults) {
  const auto path = std::filesystem::temp_directory_path() / "mnemosim_cli_output.csv";
  const auto metrics = std::filesystem::temp_directory_path() / "mnemosim_cli_metrics.json";
  const auto o = invoke({"simulate", src("scenarios/demo.json"), "-o", path.string(), "--metrics-out", metrics.string()});
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.out, "");
  EXPECT_EQ(slurp(path.string()), slurp(src("tests/golden/demo_seed42.csv")));
  EXPECT_EQ(nlohmann::json::parse(slurp(metrics.string()))["seed"], 42);
  std::filesystem::remove(path);
  std::filesystem::remove(metrics);
}

TEST(Cli, CheckTemporal) {
  const auto t1 = invoke({"check-temporal", src("tests/fixtures/trace_counterexample.json"), "--op", "theorem1"});
  ASSERT_EQ(t1.code, 0) << t1.err;
  const auto j = nlohmann::json::parse(t1.out);
  EXPECT_EQ(j["always"], false);
  EXPECT_EQ(j["eventually"], true);
  EXPECT_EQ(j["holds"], true);

  const auto nx = invoke({"check-temporal", src("tests/fixtures/trace_lasso.json"), "--op", "next", "--step", "1"});
  EXPECT_EQ(nlohmann::json::parse(nx.out)["value"], true);

  const auto sp = invoke({"check-temporal", src("tests/fixtures/trace_branching.json"), "--op", "superposition",
                          "--step", "1"});
  ASSERT_EQ(sp.code, 0) << sp.err;
  EXPECT_EQ(nlohmann::json::parse(sp.out)["states"].size(), 3u);

  const auto not_lasso = invoke({"check-temporal", src("tests/fixtures/trace_counterexample.json"), "--op", "theorem2"});
  EXPECT_EQ(not_lasso.code, 1);
  EXPECT_EQ(invoke({"check-temporal", src("tests/fixtures/trace_bad_bot.json"), "--op", "box"}).code, 1);
}

TEST(Cli, LatencyAndInfluence) {
  const auto lat = invoke({"latency", src("tests/fixtures/good.json"), "--target", "P2", "--anchor", "P1"});
  ASSERT_EQ(lat.code, 0) << lat.err;
  EXPECT_EQ(nlohmann::json::parse(lat.out)["T_R"], 1.0);

  const auto missing = invoke({"latency", src("tests/fixtures/good.json"), "--target", "P2"});
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find("anchor"), std::string::npos);

  const auto inf = invoke({"influence", src("scenarios/demo.json"), "--src", "P1", "--dst", "P3", "--mode", "total"});
  ASSERT_EQ(inf.code, 0) << inf.err;
  const auto j = nlohmann::json::parse(inf.out);
  EXPECT_GT(j["value"].get<double>(), 0.6);
}

TEST(Cli, MetricsChainsCsv) {
  const auto o = invoke({"metrics", src("scenarios/demo.json"), "--chains"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.out.substr(0, o.out.find('\n')), "chain_id,H_bits,efficiency,mean_T_R");
}

class HelpGolden : public ::testing::TestWithParam<std::string> {};

TEST_P(HelpGolden, MatchesFile) {
  std::vector<std::string> args;
  if (!GetParam().empty()) args.push_back(GetParam());
  args.push_back("--help");
  const auto o = invoke(args);
  EXPECT_EQ(o.code, 0);
  const std::string name = GetParam().empty() ? "main" : GetParam();
  EXPECT_EQ(o.out, slurp(src("tests/golden/help_" + name + ".txt")));
}

INSTANTIATE_TEST_SUITE_P(Subcommands, HelpGolden,
                         ::testing::Values("", "validate", "simulate", "check-temporal", "latency", "influence",
                                           "metrics"),
                         [](const auto& info) {
                           std::string n = info.param.empty() ? "main" : info.param;
                           std::erase(n, '-');
                           return n;
                         });
