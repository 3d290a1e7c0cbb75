#include "cobe/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "cobe/cobe.hpp"
#include "cobe/gcobe.hpp"
#include "cobe/leave_one_out.hpp"
#include "cobe/linucb.hpp"
#include "cobe/oracles.hpp"
#include "cobe/phased_elimination.hpp"
#include "cobe/ucbvi.hpp"

namespace cobe {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class FixedPolicy final : public Learner {
 public:
  explicit FixedPolicy(Policy pi) : pi_(std::move(pi)) {}
  Policy select(const Context&, Rng&) override { return pi_; }
  void update(const Feedback&) override {}
  RegretProfile profile() const override { return {}; }

 private:
  Policy pi_;
};

Policy parse_policy(const std::string& id) {
  Policy pi;
  std::stringstream ss(id);
  std::string part;
  while (std::getline(ss, part, '.')) {
    try {
      std::size_t used = 0;
      pi.actions.push_back(std::stoi(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ConfigError("tms_policy '" + id + "' is not a dot-separated action list");
    }
  }
  if (pi.actions.empty()) throw ConfigError("tms_policy is empty");
  return pi;
}

void fmt(std::string& out, double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

bool is_checkpoint(long long t, long long horizon) { return t == horizon || (t & (t - 1)) == 0; }

}  // namespace

std::shared_ptr<const BaseFactory> make_factory(const ExperimentConfig& c) {
  const double T = static_cast<double>(std::max<long long>(c.T, 1));
  if (c.base == "pe") {
    LinearBandit b = make_bandit(c);
    std::vector<int> ids(b.arms.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
    return std::make_shared<PeFactory>(b.arms, ids, T, c.delta, c.kappa);
  }
  if (c.base == "ucbvi") {
    const TabularMdp m = make_tabular(c);
    return std::make_shared<UcbviFactory>(MdpShape{m.S, m.A, m.H, m.s1}, T, c.delta, c.kappa);
  }
  LinUcbSpec spec;
  if (c.family == "linear_mdp") {
    const LinearMdp lin = onehot_linear_mdp(make_tabular(c));
    spec.d = lin.dim();
    spec.H = lin.H;
    spec.S = lin.S;
    spec.A = lin.A;
    spec.phi = lin.phi;
  } else if (c.family == "bandit") {
    spec.d = make_bandit(c).dim();
  } else {
    spec.d = c.generator == "lower_bound" ? 2 : c.d;
  }
  return std::make_shared<LinUcbFactory>(spec, T, c.delta, c.kappa, c.zeta0);
}

std::unique_ptr<Learner> make_learner(const ExperimentConfig& c, const World& world) {
  if (c.algorithm == "oracle_best") return std::make_unique<FixedPolicy>(world.best_policy());
  const auto factory = make_factory(c);
  BasicOptions options;
  if (c.known_gap) {
    options.use_known_gap = true;
    options.gap = true_gap(c);
    if (!options.gap) throw ConfigError("known_gap needs an enumerable instance with a unique optimum");
  }
  if (c.algorithm == "base") return factory->make(c.theta);
  if (c.algorithm == "cobe") return std::make_unique<Cobe>(factory, world.c_max(), options);
  if (c.algorithm == "gcobe") return std::make_unique<Gcobe>(factory, world.c_max(), options);
  // tms
  const Policy pihat = c.tms_policy.empty() ? world.best_policy() : parse_policy(c.tms_policy);
  const RegretProfile p = factory->profile();
  const double beta4 = gcobe_beta4(p, world.c_max(), factory->horizon(), factory->delta());
  return std::make_unique<TwoModelSelect>(c.tms_L, beta4, factory->horizon(), pihat,
                                          excluding_learner_maker(factory, pihat, world.c_max()), p);
}

RunResult run_seed(const ExperimentConfig& c, std::uint64_t seed, std::ostream* trace) {
  const auto t0 = std::chrono::steady_clock::now();
  std::unique_ptr<World> world = make_world(c);
  std::unique_ptr<Learner> learner = make_learner(c, *world);
  Rng rng(seed);
  CorruptionLedger corruption(world->c_max());
  RegretLedger regret;

  RunResult r;
  r.seed = seed;
  r.T = c.T;
  r.ctype = learner->profile().ctype;
  if (world->context_free()) r.best_policy = world->best_policy().id();

  std::string rows;
  if (trace) {
    rows += kTraceSchema;
    rows += '\n';
    rows += kTraceHeader;
    rows += '\n';
  }
  for (long long t = 1; t <= c.T; ++t) {
    const Context ctx = world->begin_round(static_cast<int>(t), rng);
    const Policy pi = learner->select(ctx, rng);
    const RoundTag tag = learner->tag();
    const RoundOutcome out = world->play(pi, rng);
    learner->update(out.feedback);
    corruption.accumulate(out.c);
    regret.record(out.mu_star, out.mu_chosen);
    if (is_checkpoint(t, c.T)) r.checkpoints.push_back({t, regret.cum_regret()});
    if (trace) {
      rows += std::to_string(t);
      rows += ',';
      rows += std::to_string(tag.phase);
      rows += ',';
      rows += std::to_string(tag.index);
      rows += ',';
      rows += std::to_string(tag.choice);
      rows += ',';
      rows += pi.id();
      rows += ',';
      fmt(rows, out.feedback.reward);
      rows += ',';
      fmt(rows, out.c);
      rows += ',';
      fmt(rows, regret.cum_regret());
      rows += ',';
      fmt(rows, corruption.agg_a());
      rows += ',';
      fmt(rows, corruption.agg_r());
      rows += '\n';
    }
  }
  if (trace) *trace << rows;

  r.final_regret = regret.cum_regret();
  r.c_a = corruption.agg_a();
  r.c_r = corruption.agg_r();
  if (const auto* g = dynamic_cast<const Gcobe*>(learner.get())) {
    r.events = g->events();
    r.tms_epochs = g->tms_epochs();
    r.final_phase = g->phase();
    if (g->pihat()) r.pihat = g->pihat()->id();
  } else if (const auto* cb = dynamic_cast<const Cobe*>(learner.get())) {
    r.events = cb->events();
    r.final_phase = 1;
  } else if (const auto* tms = dynamic_cast<const TwoModelSelect*>(learner.get())) {
    r.tms_epochs = tms->epochs();
    r.final_phase = 2;
    r.pihat = tms->pihat().id();
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

namespace {

template <typename Job>
void parallel_for(std::size_t n, int jobs, Job&& job) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1))));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

std::vector<RunResult> run(const ExperimentConfig& c, int jobs, bool write_files) {
  validate_config(c);
  std::vector<RunResult> results(c.seeds.size());
  std::vector<std::string> traces(c.seeds.size());
  parallel_for(c.seeds.size(), jobs, [&](std::size_t i) {
    if (write_files) {
      std::ostringstream os;
      results[i] = run_seed(c, c.seeds[i], &os);
      traces[i] = os.str();
    } else {
      results[i] = run_seed(c, c.seeds[i]);
    }
  });
  if (write_files) {
    const fs::path dir(c.out);
    fs::create_directories(dir);
    for (std::size_t i = 0; i < results.size(); ++i)
      write_file(dir / ("trace_" + std::to_string(c.seeds[i]) + ".csv"), traces[i]);
    write_file(dir / "summary.json", summary_json(c, results));
  }
  return results;
}

std::string summary_json(const ExperimentConfig& c, const std::vector<RunResult>& results) {
  json runs = json::array();
  for (const RunResult& r : results) {
    json cps = json::array();
    for (const Checkpoint& cp : r.checkpoints) cps.push_back({cp.t, cp.regret});
    json events = json::array();
    for (const MetaEvent& e : r.events) events.push_back({{"t", e.t}, {"kind", e.kind}, {"value", e.value}});
    json epochs = json::array();
    for (const TmsEpoch& e : r.tms_epochs)
      epochs.push_back({{"j", e.j},
                        {"start", e.start},
                        {"length", e.length},
                        {"gap", e.gap},
                        {"budget", e.budget},
                        {"p", e.p},
                        {"outcome", e.outcome}});
    runs.push_back({{"seed", r.seed},
                    {"trace", "trace_" + std::to_string(r.seed) + ".csv"},
                    {"T", r.T},
                    {"final_regret", r.final_regret},
                    {"checkpoints", cps},
                    {"C_a", r.c_a},
                    {"C_r", r.c_r},
                    {"corruption_type", to_string(r.ctype)},
                    {"events", events},
                    {"tms_epochs", epochs},
                    {"final_phase", r.final_phase},
                    {"pihat", r.pihat},
                    {"best_policy", r.best_policy},
                    {"wall_seconds", r.wall_seconds}});
  }
  json j = {{"schema", "cobe-summary/1"}, {"config", json::parse(dump_config(c))}, {"runs", runs}};
  return j.dump(2);
}

double quantile(std::vector<double> v, double q) {
  require(!v.empty(), "quantile of an empty sample");
  require(q >= 0.0 && q <= 1.0, "quantile level outside [0, 1]");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::vector<SweepRow> sweep(const ExperimentConfig& c, const std::string& axis, const std::vector<double>& values,
                            int jobs, bool write_files) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::vector<SweepRow> rows;
  std::string csv = "# schema=cobe-sweep/1\n" + axis + ",runs,median,q1,q3\n";
  for (double v : values) {
    ExperimentConfig point = c;
    set_axis(point, axis, v);
    char tag[64];
    std::snprintf(tag, sizeof tag, "%s_%.17g", axis.c_str(), v);
    point.out = (fs::path(c.out) / tag).string();
    const std::vector<RunResult> results = run(point, jobs, write_files);
    std::vector<double> finals;
    for (const RunResult& r : results) finals.push_back(r.final_regret);
    SweepRow row{v, finals.size(), quantile(finals, 0.5), quantile(finals, 0.25), quantile(finals, 0.75)};
    rows.push_back(row);
    fmt(csv, row.value);
    csv += ',' + std::to_string(row.runs) + ',';
    fmt(csv, row.median);
    csv += ',';
    fmt(csv, row.q1);
    csv += ',';
    fmt(csv, row.q3);
    csv += '\n';
  }
  if (write_files) {
    fs::create_directories(c.out);
    write_file(fs::path(c.out) / "sweep.csv", csv);
  }
  return rows;
}

LowerBoundReport lowerbound_demo(long long corrupted, long long horizon) {
  if (!(corrupted >= 0 && corrupted < horizon)) throw ConfigError("lowerbound needs 0 <= C < T");
  const LowerBoundTrace tr = lower_bound_trace(corrupted, horizon);
  LowerBoundReport r;
  r.C = corrupted;
  r.T = horizon;
  r.regret = tr.regret;
  r.bound = std::sqrt(static_cast<double>(corrupted) * static_cast<double>(horizon));
  r.ratio = r.bound > 0.0 ? r.regret / r.bound : 0.0;
  r.matches_closed_form = tr.regret == tr.closed_form;
  return r;
}

}  // namespace cobe
