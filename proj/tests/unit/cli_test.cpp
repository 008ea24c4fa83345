#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "parisian_cli/cli.hpp"
#include "parisian_cli/csv.hpp"
#include "parisian_cli/scenario.hpp"

using namespace parisian::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "parisian");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("parisian_cli_test_" + name);
  std::ofstream(p) << text;
  return p;
}

std::string doc(const std::string& command) { return std::string(PARISIAN_SCENARIO_DIR) + "/" + command + ".json"; }

Table parse(const std::string& csv) {
  std::istringstream in(csv);
  return read_table(in);
}

}  // namespace

TEST(Cli, OrderProbabilitySymmetricRow) {
  const auto r = run_cli({"order-prob", "--family", "brownian_drift", "--mu", "0", "--a", "0", "--b", "1", "--x", "0.5",
                          "--u", "1", "--v", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, "quantity,value,std_error\norder_probability,0.500000000000,\n");
}

TEST(Cli, RecurrentRuinRow) {
  const auto r = run_cli({"ruin", "--family", "reflected_bm", "--a", "1", "--u", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, "quantity,value,std_error\nruin_probability,1.000000000000,\n");
}

TEST(Cli, NumberFormat) {
  EXPECT_EQ(format_number(0.0), "0.000000000000");
  EXPECT_EQ(format_number(0.357412887583), "0.357412887583");
  EXPECT_EQ(format_number(0.0034130645), "3.41306450000e-03");
  EXPECT_EQ(format_number(-12.5), "-1.25000000000e+01");
}

TEST(Cli, FlagsOverrideFile) {
  const auto r = run_cli({"order-prob", "--scenario", doc("order-prob"), "--x", "0"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Table t = parse(r.out);
  EXPECT_NEAR(std::stod(t.rows.at(0).at(t.column("value"))), 1 / (2 + std::sqrt(2 / M_PI)), 1e-12);
}

TEST(Cli, InvalidScenarioNamesLineAndField) {
  const auto p = write_temp("bad.json", "{\n  \"model\": {\"family\": \"brownian_drift\"},\n  \"query\": {\n"
                                         "    \"a\": 0.0,\n    \"x\": 3.0\n  }\n}\n");
  const auto r = run_cli({"order-prob", "--scenario", p.string()});
  EXPECT_EQ(r.code, kExitInvalid);
  EXPECT_NE(r.err.find(p.string() + ":5: query.x"), std::string::npos) << r.err;
}

TEST(Cli, UnknownKeyIsRejected) {
  const auto p = write_temp("typo.json", "{\n  \"query\": {\"gama\": 1.0}\n}\n");
  const auto r = run_cli({"pair", "--scenario", p.string()});
  EXPECT_EQ(r.code, kExitInvalid);
  EXPECT_NE(r.err.find(":2: query.gama: unknown key"), std::string::npos) << r.err;
}

TEST(Cli, MalformedJsonReportsLine) {
  const auto p = write_temp("broken.json", "{\n  \"model\": {\n    \"mu\": 1.0,,\n  }\n}\n");
  const auto r = run_cli({"ruin", "--scenario", p.string()});
  EXPECT_EQ(r.code, kExitInvalid);
  EXPECT_NE(r.err.find(p.string() + ":3:"), std::string::npos) << r.err;
}

TEST(Cli, FlagErrorsNameTheFlag) {
  const auto r = run_cli({"ruin", "--family", "bessel3_drift", "--mu", "-1"});
  EXPECT_EQ(r.code, kExitInvalid);
  EXPECT_NE(r.err.find("flag --mu"), std::string::npos) << r.err;
  EXPECT_EQ(run_cli({"pair", "--a", "2"}).code, kExitInvalid);
  EXPECT_EQ(run_cli({"pair", "--gamma", "1"}).code, kExitInvalid);
  EXPECT_EQ(run_cli({"nonsense"}).code, kExitInvalid);
  EXPECT_EQ(run_cli({}).code, kExitInvalid);
  EXPECT_EQ(run_cli({"ruin", "--scenario", "/nonexistent/s.json"}).code, kExitInvalid);
}

TEST(Cli, NumericalFailureExitCode) {
  const auto r = run_cli({"meander", "--family", "bessel3_drift", "--mu", "1", "--a", "0.5", "--u", "1"});
  EXPECT_EQ(r.code, kExitNumerical);
  EXPECT_NE(r.err.find("best estimate"), std::string::npos) << r.err;
}

TEST(Cli, EveryDocumentedScenarioParses) {
  for (const char* command : {"transform", "pair", "one-barrier", "order-prob", "ruin", "meander", "invert-cdf",
                              "simulate", "verify"}) {
    EXPECT_NO_THROW(load_scenario(doc(command))) << command;
  }
}

TEST(Cli, FormulaCommandsOnDocumentedScenarios) {
  for (const char* command : {"transform", "pair", "one-barrier", "order-prob", "ruin", "meander", "invert-cdf"}) {
    const auto r = run_cli({command, "--scenario", doc(command)});
    ASSERT_EQ(r.code, kExitOk) << command << ": " << r.err;
    const Table t = parse(r.out);
    EXPECT_FALSE(t.rows.empty()) << command;
  }
}

TEST(Cli, InvertCdfTable) {
  const auto r = run_cli({"invert-cdf", "--scenario", doc("invert-cdf")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Table t = parse(r.out);
  ASSERT_EQ(t.header, (std::vector<std::string>{"t", "cdf"}));
  ASSERT_EQ(t.rows.size(), 5u);
  double prev = 0.0;
  for (const auto& row : t.rows) {
    const double v = std::stod(row[1]);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Cli, MeanderDensityTable) {
  const auto r = run_cli({"meander", "--scenario", doc("meander")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Table t = parse(r.out);
  ASSERT_EQ(t.header, (std::vector<std::string>{"z", "density"}));
  // Density w.r.t. the speed measure 2 dz: half the Rayleigh density.
  EXPECT_NEAR(std::stod(t.rows.at(1).at(1)), 0.5 * std::exp(-0.5), 1e-6);
}

TEST(Cli, SimulationIsReproducibleAndWritesFile) {
  const std::vector<std::string> args = {"simulate", "--scenario", doc("simulate"), "--n-paths", "300", "--horizon", "50"};
  const auto first = run_cli(args);
  const auto second = run_cli(args);
  ASSERT_EQ(first.code, kExitOk) << first.err;
  EXPECT_EQ(first.out, second.out);

  const fs::path out = fs::temp_directory_path() / "parisian_cli_test_sim.csv";
  auto with_out = args;
  with_out.insert(with_out.end(), {"--out", out.string(), "--threads", "2"});
  const auto third = run_cli(with_out);
  ASSERT_EQ(third.code, kExitOk) << third.err;
  EXPECT_TRUE(third.out.empty());
  std::ifstream in(out);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(text.str(), first.out);
  const Table t = parse(first.out);
  EXPECT_EQ(t.header, (std::vector<std::string>{"quantity", "value", "std_error"}));
}

TEST(Cli, ReadTableRejectsRaggedRows) {
  std::istringstream in("a,b\n1,2\n3\n");
  try {
    read_table(in);
    FAIL() << "expected an error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos) << e.what();
  }
}

TEST(Cli, VerifyFailureExitCode) {
  // Coarse steps without the bridge correction miss most short excursions,
  // so simulated Parisian times come far too early.
  const auto p = write_temp("coarse.json", R"({
  "model": {"family": "brownian_drift"},
  "query": {"a": 0.0, "b": 1.0, "x": 0.0, "u": 1.0, "v": 1.0},
  "inversion": {"t_grid": [1.5, 2.0]},
  "simulation": {"n_paths": 4000, "dt": 0.25, "horizon": 100.0, "bridge_correction": false}
})");
  const auto r = run_cli({"verify", "--scenario", p.string()});
  EXPECT_EQ(r.code, kExitVerify) << r.out << r.err;
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}
