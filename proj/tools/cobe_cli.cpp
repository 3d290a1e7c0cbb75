// cobe run | sweep | lowerbound | report

#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cobe/config.hpp"
#include "cobe/errors.hpp"
#include "cobe/report.hpp"
#include "cobe/runner.hpp"

namespace {

std::vector<std::uint64_t> parse_seed_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw cobe::ConfigError("--seed-list entry '" + part + "' is not a nonnegative integer");
    }
  }
  if (out.empty()) throw cobe::ConfigError("--seed-list is empty");
  return out;
}

struct Common {
  std::string config;
  int seeds = 0;
  std::string seed_list;
  std::string out;
  double kappa = 0.0;
  int jobs = 1;

  void add(CLI::App* app) {
    app->add_option("--config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    auto* n = app->add_option("--seeds", seeds, "run seeds 0..N-1")->check(CLI::PositiveNumber);
    app->add_option("--seed-list", seed_list, "comma-separated seeds")->excludes(n);
    app->add_option("--out", out, "output directory");
    app->add_option("--kappa", kappa, "profile calibration factor")->check(CLI::PositiveNumber);
    app->add_option("--jobs", jobs, "parallel seeds")->check(CLI::PositiveNumber);
  }

  cobe::ExperimentConfig load() const {
    cobe::ExperimentConfig c = cobe::load_config(config);
    if (seeds > 0) {
      c.seeds.clear();
      for (int s = 0; s < seeds; ++s) c.seeds.push_back(static_cast<std::uint64_t>(s));
    }
    if (!seed_list.empty()) c.seeds = parse_seed_list(seed_list);
    if (!out.empty()) c.out = out;
    if (kappa > 0.0) c.kappa = kappa;
    cobe::validate_config(c);
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corruption-robust model selection experiments"};
  app.require_subcommand(1);

  Common run_opts;
  auto* run = app.add_subcommand("run", "run every seed of a config");
  run_opts.add(run);

  Common sweep_opts;
  std::string axis;
  std::vector<double> values;
  auto* sweep = app.add_subcommand("sweep", "run a config over values of one parameter");
  sweep_opts.add(sweep);
  sweep->add_option("--axis", axis, "T, budget, gap, kappa, d or S")->required();
  sweep->add_option("--values", values, "axis values")->required()->delimiter(',');

  long long lb_c = 100, lb_t = 10000;
  auto* lb = app.add_subcommand("lowerbound", "exact regret of least squares on the lower-bound instance");
  lb->add_option("-C,--corrupted", lb_c, "corrupted rounds");
  lb->add_option("-T,--horizon", lb_t, "horizon");

  std::string report_dir;
  auto* rep = app.add_subcommand("report", "plot data and summary for a run directory");
  rep->add_option("dir", report_dir, "run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      const cobe::ExperimentConfig c = run_opts.load();
      const auto results = cobe::run(c, run_opts.jobs, true);
      for (const auto& r : results)
        std::printf("seed %llu  regret %.6g  C_a %.6g  C_r %.6g  %.2fs\n", static_cast<unsigned long long>(r.seed),
                    r.final_regret, r.c_a, r.c_r, r.wall_seconds);
      std::printf("wrote %s\n", c.out.c_str());
    } else if (*sweep) {
      const cobe::ExperimentConfig c = sweep_opts.load();
      const auto rows = cobe::sweep(c, axis, values, sweep_opts.jobs, true);
      std::printf("%-14s %6s %14s %14s %14s\n", axis.c_str(), "runs", "median", "q1", "q3");
      for (const auto& r : rows) std::printf("%-14.6g %6zu %14.6g %14.6g %14.6g\n", r.value, r.runs, r.median, r.q1, r.q3);
      std::printf("wrote %s/sweep.csv\n", c.out.c_str());
    } else if (*lb) {
      const cobe::LowerBoundReport r = cobe::lowerbound_demo(lb_c, lb_t);
      std::printf("C %lld  T %lld\nregret %.17g\nsqrt(CT) %.17g\nratio %.17g\nclosed form %s\n", r.C, r.T, r.regret,
                  r.bound, r.ratio, r.matches_closed_form ? "matches" : "DIFFERS");
    } else if (*rep) {
      const cobe::ReportResult r = cobe::report(report_dir);
      std::printf("%zu runs  median final regret %.6g  IQR [%.6g, %.6g]\n", r.runs, r.final_median, r.final_q1,
                  r.final_q3);
      std::printf("wrote %s/regret_curve.dat and report.json\n", report_dir.c_str());
    }
  } catch (const cobe::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const cobe::ContractError& e) {
    std::fprintf(stderr, "contract violation: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
