#pragma once

#include <string>
#include <vector>

namespace cobe {

struct CurvePoint {
  long long t = 0;
  double median = 0.0;
  double iqr = 0.0;
};

struct ReportResult {
  std::vector<CurvePoint> curve;
  std::size_t runs = 0;
  double final_median = 0.0;
  double final_q1 = 0.0;
  double final_q3 = 0.0;
};

/// Re-reads summary.json and every trace in `run_dir`, checks that the
/// summary agrees with the trace tails, and writes regret_curve.dat
/// (t, median, IQR per checkpoint) and report.json next to them. Missing or
/// malformed files raise ConfigError naming the file.
ReportResult report(const std::string& run_dir);

}  // namespace cobe
