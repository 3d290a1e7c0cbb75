#include "cobe/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cobe/errors.hpp"
#include "cobe/runner.hpp"

namespace cobe {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TraceTail {
  std::map<long long, double> regret_at;  // every row
  long long last_t = 0;
  double cum_regret = 0.0;
  double c_a = 0.0;
  double c_r = 0.0;
};

[[noreturn]] void bad(const fs::path& file, const std::string& what) {
  throw ConfigError(file.string() + ": " + what);
}

double to_double(const fs::path& file, const std::string& s, long long line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    bad(file, "line " + std::to_string(line) + ": '" + s + "' is not a number");
  }
}

TraceTail read_trace(const fs::path& file) {
  std::ifstream in(file);
  if (!in) bad(file, "trace file is missing");
  std::string line;
  if (!std::getline(in, line) || line != kTraceSchema) bad(file, "first line is not '" + std::string(kTraceSchema) + "'");
  if (!std::getline(in, line) || line != kTraceHeader) bad(file, "second line is not the trace header");
  TraceTail tail;
  long long lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 10) bad(file, "line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) + " columns, expected 10");
    const long long t = static_cast<long long>(to_double(file, cells[0], lineno));
    if (t != tail.last_t + 1) bad(file, "line " + std::to_string(lineno) + ": rounds are not consecutive");
    tail.last_t = t;
    tail.cum_regret = to_double(file, cells[7], lineno);
    tail.c_a = to_double(file, cells[8], lineno);
    tail.c_r = to_double(file, cells[9], lineno);
    tail.regret_at[t] = tail.cum_regret;
  }
  return tail;
}

}  // namespace

ReportResult report(const std::string& run_dir) {
  const fs::path dir(run_dir);
  const fs::path summary_path = dir / "summary.json";
  std::ifstream in(summary_path);
  if (!in) bad(summary_path, "summary is missing (run the experiment first)");
  json summary;
  try {
    in >> summary;
  } catch (const json::exception& e) {
    bad(summary_path, std::string("summary is not valid JSON: ") + e.what());
  }
  if (!summary.contains("runs") || !summary["runs"].is_array() || summary["runs"].empty())
    bad(summary_path, "summary lists no runs");

  ReportResult out;
  std::map<long long, std::vector<double>> at;
  std::vector<double> finals;
  json per_seed = json::array();
  try {
    for (const json& r : summary["runs"]) {
      const fs::path trace_path = dir / r.at("trace").get<std::string>();
      const TraceTail tail = read_trace(trace_path);
      const long long T = r.at("T").get<long long>();
      if (tail.last_t != T) bad(trace_path, "trace has " + std::to_string(tail.last_t) + " rounds, summary says " + std::to_string(T));
      const double final_regret = r.at("final_regret").get<double>();
      if (T > 0 && (tail.cum_regret != final_regret || tail.c_a != r.at("C_a").get<double>() ||
                    tail.c_r != r.at("C_r").get<double>()))
        bad(trace_path, "trace tail disagrees with summary.json");
      for (const json& cp : r.at("checkpoints")) {
        const long long t = cp.at(0).get<long long>();
        if (!tail.regret_at.count(t) || tail.regret_at.at(t) != cp.at(1).get<double>())
          bad(trace_path, "checkpoint t=" + std::to_string(t) + " disagrees with summary.json");
        at[t].push_back(cp.at(1).get<double>());
      }
      finals.push_back(final_regret);
      per_seed.push_back({{"seed", r.at("seed")}, {"final_regret", final_regret}, {"tail_consistent", true}});
    }
  } catch (const json::exception& e) {
    bad(summary_path, std::string("summary has an unexpected shape: ") + e.what());
  }

  out.runs = finals.size();
  out.final_median = quantile(finals, 0.5);
  out.final_q1 = quantile(finals, 0.25);
  out.final_q3 = quantile(finals, 0.75);
  std::string dat = "# t median iqr\n";
  for (const auto& [t, v] : at) {
    if (v.size() != out.runs) continue;  // checkpoint not shared by every run
    CurvePoint p{t, quantile(v, 0.5), quantile(v, 0.75) - quantile(v, 0.25)};
    out.curve.push_back(p);
    char buf[128];
    std::snprintf(buf, sizeof buf, "%lld %.17g %.17g\n", p.t, p.median, p.iqr);
    dat += buf;
  }
  {
    std::ofstream f(dir / "regret_curve.dat", std::ios::binary);
    if (!f) bad(dir / "regret_curve.dat", "cannot write");
    f << dat;
  }
  json rep = {{"schema", "cobe-report/1"},
              {"runs", out.runs},
              {"final_regret", {{"median", out.final_median}, {"q1", out.final_q1}, {"q3", out.final_q3}}},
              {"checkpoints", out.curve.size()},
              {"per_seed", per_seed}};
  std::ofstream f(dir / "report.json", std::ios::binary);
  if (!f) bad(dir / "report.json", "cannot write");
  f << rep.dump(2) << '\n';
  return out;
}

}  // namespace cobe
