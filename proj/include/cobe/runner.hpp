#pragma once

// Seeded experiment runs: one world, one learner, one Rng per seed; traces and
// summaries on disk.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "cobe/basic.hpp"
#include "cobe/config.hpp"
#include "cobe/two_model_select.hpp"

namespace cobe {

inline constexpr const char* kTraceSchema = "# schema=cobe-trace/1";
inline constexpr const char* kTraceHeader = "t,phase,index,choice,policy,reward,c_t,cum_regret,C_a,C_r";

struct Checkpoint {
  long long t = 0;
  double regret = 0.0;
};

struct RunResult {
  std::uint64_t seed = 0;
  long long T = 0;
  double final_regret = 0.0;
  std::vector<Checkpoint> checkpoints;  // t = 1, 2, 4, ... and T
  double c_a = 0.0;
  double c_r = 0.0;
  CorruptionType ctype = CorruptionType::A;
  std::vector<MetaEvent> events;
  std::vector<TmsEpoch> tms_epochs;
  int final_phase = 0;
  std::string pihat;        // G-COBE / TMS: the defended policy, if any
  std::string best_policy;  // context-free worlds only
  double wall_seconds = 0.0;
};

std::shared_ptr<const BaseFactory> make_factory(const ExperimentConfig& c);
std::unique_ptr<Learner> make_learner(const ExperimentConfig& c, const World& world);

/// One seeded run. When `trace` is given the CSV trace is written to it.
RunResult run_seed(const ExperimentConfig& c, std::uint64_t seed, std::ostream* trace = nullptr);

/// All seeds of `c`, `jobs` at a time. With write_files, c.out receives
/// trace_<seed>.csv per seed and summary.json.
std::vector<RunResult> run(const ExperimentConfig& c, int jobs = 1, bool write_files = true);

std::string summary_json(const ExperimentConfig& c, const std::vector<RunResult>& results);

/// Linear-interpolation quantile of an unsorted sample.
double quantile(std::vector<double> v, double q);

struct SweepRow {
  double value = 0.0;
  std::size_t runs = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

/// Final-regret medians and quartiles per value of `axis`. With write_files each
/// point goes to c.out/<axis>_<value>/ and the table to c.out/sweep.csv.
std::vector<SweepRow> sweep(const ExperimentConfig& c, const std::string& axis, const std::vector<double>& values,
                            int jobs = 1, bool write_files = true);

struct LowerBoundReport {
  long long C = 0;
  long long T = 0;
  double regret = 0.0;
  double bound = 0.0;  // sqrt(C T)
  double ratio = 0.0;  // regret / bound (0 when C = 0)
  bool matches_closed_form = false;
};

LowerBoundReport lowerbound_demo(long long corrupted, long long horizon);

}  // namespace cobe
