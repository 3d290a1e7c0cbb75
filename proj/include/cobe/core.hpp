#pragma once

// Shared vocabulary: corruption and regret accounting, regret profiles of base
// learners, and the learner interface every algorithm implements.

#include <Eigen/Dense>
#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cobe/errors.hpp"
#include "cobe/rng.hpp"

namespace cobe {

/// Per-round corruption magnitudes and their two running aggregates:
/// the arithmetic total C^a_t = sum c and the root-mean-square total
/// C^r_t = sqrt(t * sum c^2).
class CorruptionLedger {
 public:
  explicit CorruptionLedger(double c_max);

  /// Rejects c outside [0, c_max] with ContractError.
  void accumulate(double c);

  double agg_a() const { return sum_; }
  double agg_r() const;
  double c_max() const { return c_max_; }
  double max_c() const { return max_; }
  std::size_t rounds() const { return per_round_.size(); }
  const std::vector<double>& per_round() const { return per_round_; }

 private:
  double c_max_;
  std::vector<double> per_round_;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
  double max_ = 0.0;
};

enum class CorruptionType { A, R };

const char* to_string(CorruptionType t);

/// Coefficients of a base learner's regret guarantee
///   R(t, theta) = sqrt(beta1 t) + beta2 theta + beta3               (gap-free)
///   R(t, theta) = min{sqrt(beta1 t), beta1 / gap} + beta2 theta + beta3  (gap form)
/// and the corruption aggregate (C^a or C^r) the guarantee is stated against.
struct RegretProfile {
  double beta1 = 1.0;
  double beta2 = 1.0;
  double beta3 = 1.0;
  CorruptionType ctype = CorruptionType::A;
  bool gap_form = false;

  /// Same coefficients, gap-free form.
  RegretProfile gap_free() const {
    RegretProfile p = *this;
    p.gap_form = false;
    return p;
  }

  RegretProfile scaled(double kappa) const {
    RegretProfile p = *this;
    p.beta1 *= kappa;
    p.beta2 *= kappa;
    p.beta3 *= kappa;
    return p;
  }
};

/// Checks beta_i >= 1 and, for gap-form profiles, beta1 >= 16 ln(T/delta) and
/// beta3 >= 10 sqrt(beta1 ln(T/delta)).
void validate(const RegretProfile& p, double horizon, double delta);

/// Raises beta1 and beta3 to the smallest values a gap-form profile admits for
/// (horizon, delta). A bound that holds for smaller coefficients holds for these.
RegretProfile with_gap_floors(RegretProfile p, double horizon, double delta);

/// R(t, theta), clamped below by theta. Gap-form profiles need `gap` in (0, 1].
double eval_regret_bound(const RegretProfile& p, double t, double theta,
                         std::optional<double> gap = std::nullopt);

/// Pseudo-regret against uncorrupted means.
class RegretLedger {
 public:
  void record(double mu_star, double mu_chosen);
  double cum_regret() const { return cum_; }
  const std::vector<double>& per_round_gap() const { return gaps_; }

 private:
  double cum_ = 0.0;
  std::vector<double> gaps_;
};

/// A deterministic policy. Bandits: one entry, the arm (or, for contextual
/// bandits, the index into the round's action set). Tabular MDPs: H*S entries,
/// actions[h * S + s] for layer h in [0, H).
struct Policy {
  std::vector<int> actions;

  Policy() = default;
  explicit Policy(std::vector<int> a) : actions(std::move(a)) {}
  static Policy arm(int a) { return Policy({a}); }

  bool operator==(const Policy&) const = default;
  auto operator<=>(const Policy&) const = default;

  /// Dot-joined action list, e.g. "1" or "0.1.1.0".
  std::string id() const;
};

/// What the learner sees before choosing: the initial state (MDPs) or the
/// round's action set (bandits).
struct Context {
  int initial_state = 0;
  std::vector<Eigen::VectorXd> actions;
};

struct Step {
  int state = 0;
  int action = 0;
  double reward = 0.0;
  int next_state = 0;
};

/// Everything a learner receives after playing: its policy, the realised
/// reward, the trajectory (MDPs) and the played feature vector (bandits).
/// Corruption levels never appear here.
struct Feedback {
  Policy policy;
  double reward = 0.0;
  std::vector<Step> steps;
  Eigen::VectorXd features;
};

/// Per-round annotation for traces: which phase of a meta-algorithm, the
/// hypothesis index k (or epoch j) and the sampled sub-learner i_t (or Y_t).
struct RoundTag {
  int phase = 0;
  int index = 0;
  int choice = -1;
};

/// Base-learner contract. select/update may be interleaved arbitrarily; the
/// only randomness available is the run's Rng handed to select.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual Policy select(const Context& ctx, Rng& rng) = 0;
  virtual void update(const Feedback& fb) = 0;
  virtual RegretProfile profile() const = 0;
  virtual RoundTag tag() const { return {}; }
};

/// Builds base-learner instances for a fixed (T, delta) and any hypothetical
/// corruption level theta.
class BaseFactory {
 public:
  virtual ~BaseFactory() = default;
  virtual std::unique_ptr<Learner> make(double theta) const = 0;
  virtual RegretProfile profile() const = 0;
  virtual double horizon() const = 0;
  virtual double delta() const = 0;
  /// Factory over the policy set with `pihat` removed. Throws ContractError if
  /// that would leave no policy, or if the learner family cannot exclude.
  virtual std::shared_ptr<const BaseFactory> excluding(const Policy& pihat) const = 0;
};

}  // namespace cobe
