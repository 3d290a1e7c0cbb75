#include "cobe/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cobe/oracles.hpp"

namespace cobe {

using nlohmann::json;

namespace {

template <typename T>
void read(const json& j, const char* key, T& into) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    into = it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type: " + e.what());
  }
}

void need(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

const std::set<std::string> kKeys = {
    "schema_version", "family", "generator", "K", "gap", "d", "arms", "w_star", "lb_rounds", "S", "A", "H", "p",
    "sigma", "env_seed", "adversary", "budget", "target", "algorithm", "base", "theta", "T", "delta", "kappa",
    "zeta0", "known_gap", "tms_L", "tms_policy", "seeds", "out"};

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

Vec random_unit(int d, Rng& rng) {
  Vec v(d);
  for (int i = 0; i < d; ++i) {
    const double u1 = 1.0 - rng.uniform(), u2 = rng.uniform();
    v(i) = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  return v / v.norm();
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  need(j.is_object(), "config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    need(kKeys.count(it.key()) > 0, "unknown config key '" + it.key() + "'");
  ExperimentConfig c;
  need(j.contains("schema_version"), "config lacks schema_version");
  read(j, "schema_version", c.schema_version);
  read(j, "family", c.family);
  read(j, "generator", c.generator);
  if (!j.contains("generator") && c.family == "contextual") c.generator = "sphere";
  read(j, "K", c.K);
  read(j, "gap", c.gap);
  read(j, "d", c.d);
  read(j, "arms", c.arms);
  read(j, "w_star", c.w_star);
  read(j, "lb_rounds", c.lb_rounds);
  read(j, "S", c.S);
  read(j, "A", c.A);
  read(j, "H", c.H);
  read(j, "p", c.p);
  read(j, "sigma", c.sigma);
  read(j, "env_seed", c.env_seed);
  read(j, "adversary", c.adversary);
  read(j, "budget", c.budget);
  read(j, "target", c.target);
  read(j, "algorithm", c.algorithm);
  read(j, "base", c.base);
  read(j, "theta", c.theta);
  read(j, "T", c.T);
  read(j, "delta", c.delta);
  read(j, "kappa", c.kappa);
  read(j, "zeta0", c.zeta0);
  read(j, "known_gap", c.known_gap);
  read(j, "tms_L", c.tms_L);
  read(j, "tms_policy", c.tms_policy);
  if (auto it = j.find("seeds"); it != j.end() && it->is_number_integer()) {
    const long long n = it->get<long long>();
    need(n >= 1, "seeds as a count must be >= 1");
    c.seeds.clear();
    for (long long s = 0; s < n; ++s) c.seeds.push_back(static_cast<std::uint64_t>(s));
  } else {
    read(j, "seeds", c.seeds);
  }
  read(j, "out", c.out);
  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const ExperimentConfig& c) {
  json j = {{"schema_version", c.schema_version},
            {"family", c.family},
            {"generator", c.generator},
            {"K", c.K},
            {"gap", c.gap},
            {"d", c.d},
            {"lb_rounds", c.lb_rounds},
            {"S", c.S},
            {"A", c.A},
            {"H", c.H},
            {"env_seed", c.env_seed},
            {"adversary", c.adversary},
            {"budget", c.budget},
            {"target", c.target},
            {"algorithm", c.algorithm},
            {"base", c.base},
            {"theta", c.theta},
            {"T", c.T},
            {"delta", c.delta},
            {"kappa", c.kappa},
            {"zeta0", c.zeta0},
            {"known_gap", c.known_gap},
            {"tms_L", c.tms_L},
            {"tms_policy", c.tms_policy},
            {"seeds", c.seeds},
            {"out", c.out}};
  if (!c.arms.empty()) j["arms"] = c.arms;
  if (!c.w_star.empty()) j["w_star"] = c.w_star;
  if (!c.p.empty()) j["p"] = c.p;
  if (!c.sigma.empty()) j["sigma"] = c.sigma;
  return j.dump(2);
}

void validate_config(const ExperimentConfig& c) {
  need(c.schema_version == kConfigSchemaVersion,
       "unsupported schema_version " + std::to_string(c.schema_version) + " (expected " +
           std::to_string(kConfigSchemaVersion) + ")");
  need(c.T >= 0, "T must be >= 0");
  need(c.delta > 0.0 && c.delta < 1.0, "delta must lie in (0, 1)");
  need(c.kappa > 0.0, "kappa must be positive");
  need(c.zeta0 > 0.0, "zeta0 must be positive");
  need(c.budget >= 0.0, "budget must be >= 0");
  need(c.theta >= 0.0, "theta must be >= 0");
  need(!c.seeds.empty(), "at least one seed is needed");

  const bool bandit = c.family == "bandit", contextual = c.family == "contextual";
  const bool tabular = c.family == "tabular_mdp", linear_mdp = c.family == "linear_mdp";
  need(bandit || contextual || tabular || linear_mdp, "unknown family '" + c.family + "'");

  if (bandit) {
    need(c.generator == "gap" || c.generator == "random" || c.generator == "explicit",
         "bandit generator must be gap, random or explicit");
    if (c.generator == "gap") {
      need(c.K >= 2, "gap bandit needs K >= 2");
      need(c.gap > 0.0 && c.gap <= 1.0, "gap must lie in (0, 1]");
    } else if (c.generator == "random") {
      need(c.K >= 1 && c.d >= 1, "random bandit needs K >= 1 and d >= 1");
    } else {
      need(!c.arms.empty() && !c.w_star.empty(), "explicit bandit needs arms and w_star");
      for (const auto& a : c.arms) need(a.size() == c.w_star.size(), "arm dimension differs from w_star");
    }
  } else if (contextual) {
    need(c.generator == "sphere" || c.generator == "lower_bound", "contextual generator must be sphere or lower_bound");
    if (c.generator == "sphere") need(c.K >= 1 && c.d >= 1, "sphere action sets need K >= 1 and d >= 1");
    if (c.generator == "lower_bound") {
      need(c.lb_rounds >= 0 && c.lb_rounds < c.T, "lower_bound needs 0 <= lb_rounds < T");
      need(c.w_star.empty() || c.w_star.size() == 2, "lower_bound w_star must be two-dimensional");
    }
  } else {
    need(c.S >= 1 && c.A >= 1 && c.H >= 1, "MDP needs S, A, H >= 1");
  }

  need(c.base == "pe" || c.base == "ucbvi" || c.base == "linucb", "unknown base '" + c.base + "'");
  if (c.algorithm == "oracle_best") {
    // no learner to pair
  } else if (c.base == "pe") need(bandit, "Robust Phased Elimination needs a fixed-action bandit (family = bandit)");
  else if (c.base == "ucbvi") need(tabular, "Robust UCBVI needs family = tabular_mdp");
  else if (c.base == "linucb") need(!tabular, "LinUCB runs on bandit, contextual or linear_mdp families");

  const std::string& alg = c.algorithm;
  need(alg == "base" || alg == "cobe" || alg == "gcobe" || alg == "tms" || alg == "oracle_best",
       "unknown algorithm '" + alg + "'");
  if (alg == "gcobe" || alg == "tms" || alg == "oracle_best")
    need(!contextual, alg + " needs a context-free environment; contextual bandits are not context-free");
  if (alg == "gcobe" || alg == "tms") {
    need(c.base != "linucb",
         alg + " needs a base learner with a gap-dependent guarantee that can exclude a policy; LinUCB has neither");
    if (bandit && c.generator != "explicit") need(c.K >= 2, alg + " needs at least two policies");
    if (bandit && c.generator == "explicit") need(c.arms.size() >= 2, alg + " needs at least two policies");
    if (tabular) need(c.A >= 2, alg + " needs A >= 2 for the leave-one-out construction");
  }
  if (alg == "tms") need(c.tms_L >= 1.0, "tms_L must be >= 1");
  if (c.known_gap) need(alg == "cobe" || alg == "gcobe", "known_gap only applies to cobe and gcobe");

  if (bandit || contextual) {
    need(c.adversary == "none" || c.adversary == "flip" || c.adversary == "boost" || c.adversary == "mirror" ||
             c.adversary == "lower_bound",
         "unknown bandit adversary '" + c.adversary + "'");
    if (c.adversary == "boost") need(c.target >= 0, "boost adversary needs a target arm");
  } else {
    need(c.adversary == "none" || c.adversary == "transition_swap", "unknown MDP adversary '" + c.adversary + "'");
    if (c.adversary == "transition_swap") need(c.A >= 2, "transition_swap needs A >= 2");
  }
}

void set_axis(ExperimentConfig& c, const std::string& axis, double value) {
  if (axis == "T") {
    c.T = std::llround(value);
  } else if (axis == "budget") {
    c.budget = value;
  } else if (axis == "gap") {
    c.gap = value;
  } else if (axis == "kappa") {
    c.kappa = value;
  } else if (axis == "d") {
    c.d = static_cast<int>(std::llround(value));
  } else if (axis == "S") {
    c.S = static_cast<int>(std::llround(value));
  } else {
    throw ConfigError("unknown sweep axis '" + axis + "' (expected T, budget, gap, kappa, d or S)");
  }
  validate_config(c);
}

LinearBandit make_bandit(const ExperimentConfig& c) {
  if (c.generator == "gap") return gap_bandit(c.K, c.gap);
  if (c.generator == "random") {
    Rng rng(c.env_seed);
    return random_linear_bandit(c.K, c.d, rng);
  }
  LinearBandit b;
  for (const auto& a : c.arms) b.arms.push_back(to_vec(a));
  b.w_star = to_vec(c.w_star);
  try {
    b.validate();
  } catch (const ContractError& e) {
    throw ConfigError(std::string("explicit bandit is invalid: ") + e.what());
  }
  return b;
}

TabularMdp make_tabular(const ExperimentConfig& c) {
  Rng rng(c.env_seed);
  TabularMdp m = random_tabular_mdp(c.S, c.A, c.H, rng);
  if (!c.p.empty() || !c.sigma.empty()) {
    m.kernel.p = c.p;
    m.kernel.sigma = c.sigma;
    try {
      m.validate();
    } catch (const ContractError& e) {
      throw ConfigError(std::string("explicit kernel is invalid: ") + e.what());
    }
  }
  return m;
}

std::unique_ptr<World> make_world(const ExperimentConfig& c) {
  if (c.family == "bandit") {
    LinearBandit b = make_bandit(c);
    return std::make_unique<BanditWorld>(std::move(b), make_bandit_adversary(c.adversary, c.budget, c.target));
  }
  if (c.family == "contextual") {
    ContextualBandit env;
    if (c.generator == "lower_bound") {
      env.w_star = c.w_star.empty() ? Vec::Ones(2) : to_vec(c.w_star);
      const double eps = std::sqrt(static_cast<double>(c.lb_rounds) / static_cast<double>(c.T));
      env.generator = lower_bound_action_sets(c.lb_rounds, eps);
    } else {
      Rng rng(c.env_seed);
      env.w_star = c.w_star.empty() ? random_unit(c.d, rng) : to_vec(c.w_star);
      need(env.w_star.size() == c.d, "w_star dimension differs from d");
      need(env.w_star.norm() <= 1.0 + 1e-12, "sphere action sets need ||w_star|| <= 1");
      env.generator = sphere_action_sets(env.w_star, c.K);
    }
    return std::make_unique<ContextualWorld>(std::move(env), make_bandit_adversary(c.adversary, c.budget, c.target));
  }
  TabularMdp m = make_tabular(c);
  if (c.family == "linear_mdp") m = onehot_linear_mdp(m).to_tabular();
  return std::make_unique<MdpWorld>(std::move(m), make_mdp_adversary(c.adversary, c.budget));
}

std::optional<double> true_gap(const ExperimentConfig& c) {
  try {
    PolicyTable t;
    if (c.family == "bandit") {
      const std::vector<double> mu = make_bandit(c).means();
      t = enumerate_policies(mu);
    } else if (c.family == "tabular_mdp" || c.family == "linear_mdp") {
      t = enumerate_policies(make_tabular(c));
    } else {
      return std::nullopt;
    }
    if (t.degenerate || t.rows.size() < 2) return std::nullopt;
    return t.gap;
  } catch (const ContractError&) {
    return std::nullopt;
  }
}

}  // namespace cobe
