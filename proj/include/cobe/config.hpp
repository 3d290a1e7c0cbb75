#pragma once

// Experiment configuration: a flat JSON object. See README.md for the schema.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cobe/core.hpp"
#include "cobe/linear_envs.hpp"
#include "cobe/tabular_mdp.hpp"
#include "cobe/world.hpp"

namespace cobe {

inline constexpr int kConfigSchemaVersion = 1;

struct ExperimentConfig {
  int schema_version = kConfigSchemaVersion;

  // environment
  std::string family = "bandit";     // bandit | contextual | tabular_mdp | linear_mdp
  std::string generator = "gap";     // bandit: gap | random | explicit; contextual: sphere | lower_bound
  int K = 2;                         // arms (bandit), actions per round (contextual sphere)
  double gap = 0.4;
  int d = 2;
  std::vector<std::vector<double>> arms;
  std::vector<double> w_star;
  int lb_rounds = 0;                 // contextual lower_bound: rounds with the wide action set
  int S = 3;
  int A = 2;
  int H = 3;
  std::vector<double> p;             // explicit tabular kernel (optional)
  std::vector<double> sigma;
  std::uint64_t env_seed = 1;

  // adversary
  std::string adversary = "none";
  double budget = 0.0;
  int target = -1;

  // algorithm
  std::string algorithm = "cobe";    // base | cobe | gcobe | tms | oracle_best
  std::string base = "pe";           // pe | ucbvi | linucb
  double theta = 0.0;                // hypothesis for algorithm = base
  long long T = 1024;
  double delta = 0.05;
  double kappa = 1.0;
  double zeta0 = 1.0;
  bool known_gap = false;
  double tms_L = 1.0;
  std::string tms_policy;            // policy id for algorithm = tms; empty: the optimal policy

  std::vector<std::uint64_t> seeds = {0};
  std::string out = "out";
};

/// Parses and validates. Unknown keys, wrong types and incompatible pairings
/// raise ConfigError.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string dump_config(const ExperimentConfig& c);

/// Checks ranges and the environment / algorithm pairing.
void validate_config(const ExperimentConfig& c);

/// Sets a numeric field by sweep-axis name (T, budget, gap, kappa, d, S).
void set_axis(ExperimentConfig& c, const std::string& axis, double value);

/// Environment instances (deterministic in env_seed).
LinearBandit make_bandit(const ExperimentConfig& c);
TabularMdp make_tabular(const ExperimentConfig& c);
std::unique_ptr<World> make_world(const ExperimentConfig& c);

/// Gap between the best and second-best policy, when the instance allows enumerating it.
std::optional<double> true_gap(const ExperimentConfig& c);

}  // namespace cobe
