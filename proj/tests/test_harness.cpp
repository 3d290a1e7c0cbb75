#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cobe/config.hpp"
#include "cobe/report.hpp"
#include "cobe/runner.hpp"

using namespace cobe;
namespace fs = std::filesystem;

namespace {

std::string tmp_dir(const std::string& name) {
  const fs::path p = fs::path(COBE_TEST_TMP) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_bandit() {
  ExperimentConfig c;
  c.family = "bandit";
  c.K = 3;
  c.gap = 0.3;
  c.adversary = "flip";
  c.budget = 20;
  c.algorithm = "cobe";
  c.base = "pe";
  c.T = 600;
  c.seeds = {0, 1, 2};
  return c;
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config(R"({"schema_version": 1, "family": "bandit", "K": 3, "seeds": 4})");
  CHECK(c.K == 3);
  CHECK(c.seeds == std::vector<std::uint64_t>{0, 1, 2, 3});
  CHECK(parse_config(dump_config(c)).seeds == c.seeds);
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 1, "horizon": 10})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 2})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 1, "K": "three"})"), ConfigError);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
}

TEST_CASE("config pairings") {
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 1, "family": "bandit", "base": "ucbvi"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 1, "family": "tabular_mdp", "base": "pe"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 1, "family": "contextual", "generator": "sphere",
                                   "base": "linucb", "algorithm": "gcobe"})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 1, "family": "linear_mdp", "base": "linucb",
                                   "algorithm": "tms"})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 1, "family": "tabular_mdp", "base": "ucbvi",
                                   "adversary": "flip"})"),
                  ConfigError);
  CHECK_NOTHROW(parse_config(R"({"schema_version": 1, "family": "tabular_mdp", "base": "ucbvi",
                                 "algorithm": "oracle_best"})"));
  ExperimentConfig c = small_bandit();
  CHECK_THROWS_AS(set_axis(c, "colour", 1.0), ConfigError);
  set_axis(c, "budget", 5.0);
  CHECK(c.budget == 5.0);
}

TEST_CASE("runs are reproducible and independent of the worker count") {
  const ExperimentConfig c = small_bandit();
  std::ostringstream a, b;
  const RunResult ra = run_seed(c, 1, &a);
  const RunResult rb = run_seed(c, 1, &b);
  CHECK(a.str() == b.str());
  CHECK(ra.final_regret == rb.final_regret);

  const auto one = run(c, 1, false);
  const auto two = run(c, 2, false);
  REQUIRE(one.size() == 3);
  REQUIRE(two.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(one[i].seed == two[i].seed);
    CHECK(one[i].final_regret == two[i].final_regret);
    CHECK(one[i].c_a == two[i].c_a);
  }
}

TEST_CASE("trace layout") {
  ExperimentConfig c = small_bandit();
  c.T = 5;
  std::ostringstream out;
  const RunResult r = run_seed(c, 0, &out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == kTraceSchema);
  std::getline(in, line);
  CHECK(line == kTraceHeader);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.rfind(std::to_string(rows) + ",", 0) == 0);
    CHECK(std::count(line.begin(), line.end(), ',') == 9);
  }
  CHECK(rows == 5);
  CHECK(r.checkpoints.back().t == 5);
  CHECK(r.c_a > 0.0);
}

TEST_CASE("zero horizon") {
  ExperimentConfig c = small_bandit();
  c.T = 0;
  std::ostringstream out;
  const RunResult r = run_seed(c, 0, &out);
  CHECK(r.final_regret == 0.0);
  CHECK(r.c_a == 0.0);
  CHECK(out.str() == std::string(kTraceSchema) + "\n" + kTraceHeader + "\n");
}

TEST_CASE("oracle policy has zero regret") {
  ExperimentConfig c;
  c.family = "tabular_mdp";
  c.algorithm = "oracle_best";
  c.base = "ucbvi";
  c.S = 2;
  c.A = 2;
  c.H = 2;
  c.T = 256;
  const RunResult r = run_seed(c, 3);
  for (const Checkpoint& cp : r.checkpoints) CHECK(cp.regret == 0.0);
}

TEST_CASE("sweeps") {
  ExperimentConfig c = small_bandit();
  c.out = tmp_dir("sweep_kappa");
  const auto rows = sweep(c, "kappa", {0.5, 1.0, 2.0}, 1, true);
  CHECK(rows.size() == 3);
  CHECK(fs::exists(fs::path(c.out) / "sweep.csv"));
  CHECK(fs::exists(fs::path(c.out) / "kappa_0.5" / "summary.json"));
  CHECK(slurp(fs::path(c.out) / "sweep.csv").rfind("# schema=cobe-sweep/1", 0) == 0);
  CHECK_THROWS_AS(sweep(c, "colour", {1.0}, 1, false), ConfigError);

  c.adversary = "none";
  c.budget = 0;
  const auto by_t = sweep(c, "T", {100, 400, 1600}, 1, false);
  for (std::size_t i = 1; i < by_t.size(); ++i) CHECK(by_t[i].median >= by_t[i - 1].median);
}

TEST_CASE("report") {
  ExperimentConfig c = small_bandit();
  c.out = tmp_dir("report_single");
  c.seeds = {4};
  const auto results = run(c, 1, true);
  const ReportResult r = report(c.out);
  CHECK(r.runs == 1);
  REQUIRE(!r.curve.empty());
  for (const CurvePoint& p : r.curve) CHECK(p.iqr == 0.0);
  CHECK(r.curve.back().t == c.T);
  CHECK(r.final_median == results[0].final_regret);
  CHECK(fs::exists(fs::path(c.out) / "regret_curve.dat"));
  CHECK(fs::exists(fs::path(c.out) / "report.json"));

  c.out = tmp_dir("report_many");
  c.seeds = {0, 1, 2, 3};
  run(c, 1, true);
  const ReportResult many = report(c.out);
  CHECK(many.runs == 4);
  CHECK(many.final_q1 <= many.final_median);
  CHECK(many.final_median <= many.final_q3);

  // a trace whose tail disagrees with the summary
  const fs::path trace = fs::path(c.out) / "trace_2.csv";
  std::string text = slurp(trace);
  text += std::to_string(c.T + 1) + ",0,0,0,0,0,0,999,0,0\n";
  std::ofstream(trace, std::ios::binary) << text;
  CHECK_THROWS_AS(report(c.out), ConfigError);
  fs::remove(trace);
  CHECK_THROWS_AS(report(c.out), ConfigError);
  CHECK_THROWS_AS(report(tmp_dir("report_empty")), ConfigError);
}

TEST_CASE("lower-bound demo") {
  const LowerBoundReport r = lowerbound_demo(100, 10000);
  CHECK(r.regret == doctest::Approx(2178.0));
  CHECK(r.bound == doctest::Approx(1000.0));
  CHECK(r.ratio == doctest::Approx(2.178));
  CHECK(r.matches_closed_form);
  CHECK(lowerbound_demo(0, 10).ratio == 0.0);
  CHECK_THROWS_AS(lowerbound_demo(10, 10), ConfigError);
}

TEST_CASE("quantiles") {
  CHECK(quantile({3.0, 1.0, 2.0}, 0.5) == 2.0);
  CHECK(quantile({1.0, 2.0, 3.0, 4.0}, 0.25) == doctest::Approx(1.75));
  CHECK(quantile({5.0}, 0.75) == 5.0);
}
