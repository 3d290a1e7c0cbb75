#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cobe/basic.hpp"
#include "cobe/config.hpp"
#include "cobe/oracles.hpp"
#include "cobe/report.hpp"
#include "cobe/runner.hpp"

namespace py = pybind11;

namespace {

py::dict result_dict(const cobe::RunResult& r) {
  py::dict d;
  d["seed"] = r.seed;
  d["T"] = r.T;
  d["final_regret"] = r.final_regret;
  py::list cps;
  for (const auto& c : r.checkpoints) cps.append(py::make_tuple(c.t, c.regret));
  d["checkpoints"] = cps;
  d["C_a"] = r.c_a;
  d["C_r"] = r.c_r;
  d["final_phase"] = r.final_phase;
  d["pihat"] = r.pihat;
  d["best_policy"] = r.best_policy;
  return d;
}

}  // namespace

PYBIND11_MODULE(_cobe, m) {
  m.doc() = "Corruption-robust model selection experiments";

  py::register_exception<cobe::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<cobe::ContractError>(m, "ContractError", PyExc_RuntimeError);

  m.def(
      "run_seed",
      [](const std::string& config_json, std::uint64_t seed, bool with_trace) {
        const cobe::ExperimentConfig c = cobe::parse_config(config_json);
        std::ostringstream trace;
        cobe::RunResult r;
        {
          py::gil_scoped_release release;
          r = cobe::run_seed(c, seed, with_trace ? &trace : nullptr);
        }
        py::dict d = result_dict(r);
        if (with_trace) d["trace"] = trace.str();
        return d;
      },
      py::arg("config_json"), py::arg("seed") = 0, py::arg("with_trace") = false,
      "Run one seed of a JSON config; returns a dict (and the CSV trace if asked).");

  m.def(
      "run",
      [](const std::string& config_json, int jobs, bool write_files) {
        const cobe::ExperimentConfig c = cobe::parse_config(config_json);
        std::vector<cobe::RunResult> rs;
        {
          py::gil_scoped_release release;
          rs = cobe::run(c, jobs, write_files);
        }
        py::list out;
        for (const auto& r : rs) out.append(result_dict(r));
        return out;
      },
      py::arg("config_json"), py::arg("jobs") = 1, py::arg("write_files") = false);

  m.def("normalize_config", [](const std::string& json) { return cobe::dump_config(cobe::parse_config(json)); },
        "Parse, validate and re-serialise a config with every default filled in.");

  m.def(
      "lowerbound",
      [](long long corrupted, long long horizon) {
        const auto r = cobe::lowerbound_demo(corrupted, horizon);
        py::dict d;
        d["C"] = r.C;
        d["T"] = r.T;
        d["regret"] = r.regret;
        d["sqrt_CT"] = r.bound;
        d["ratio"] = r.ratio;
        d["matches_closed_form"] = r.matches_closed_form;
        return d;
      },
      py::arg("C"), py::arg("T"));

  m.def("lower_bound_signs", [](long long corrupted, long long horizon) {
    return cobe::lower_bound_trace(corrupted, horizon).signs;
  });

  m.def("report", [](const std::string& dir) {
    const auto r = cobe::report(dir);
    py::dict d;
    d["runs"] = r.runs;
    d["final_median"] = r.final_median;
    d["final_q1"] = r.final_q1;
    d["final_q3"] = r.final_q3;
    py::list curve;
    for (const auto& p : r.curve) curve.append(py::make_tuple(p.t, p.median, p.iqr));
    d["curve"] = curve;
    return d;
  });

  m.def("cobe_alpha", &cobe::cobe_alpha, py::arg("k"), py::arg("k_max"));
  m.def("gcobe_alpha", &cobe::gcobe_alpha, py::arg("k"), py::arg("k_max"), py::arg("L"), py::arg("beta1"),
        py::arg("beta2"));
  m.def("quantile", &cobe::quantile);
}
