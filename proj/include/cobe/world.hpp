#pragma once

// An environment together with its adversary. The runner talks to learners and
// to the world; only the world knows the corrupted model, and only the runner
// sees c_t and the uncorrupted means.

#include <memory>
#include <optional>

#include "cobe/adversary.hpp"
#include "cobe/linear_envs.hpp"
#include "cobe/tabular_mdp.hpp"

namespace cobe {

struct RoundOutcome {
  Feedback feedback;   // what the learner gets
  double c = 0.0;      // corruption magnitude of the round
  double mu_chosen = 0.0;
  double mu_star = 0.0;
};

class World {
 public:
  virtual ~World() = default;
  /// Draws the round's context and fixes the round's corruption from the
  /// history so far.
  virtual Context begin_round(int t, Rng& rng) = 0;
  /// Executes `pi` under the corrupted model.
  virtual RoundOutcome play(const Policy& pi, Rng& rng) = 0;
  virtual double c_max() const = 0;
  /// Whether every policy has a context-independent mean.
  virtual bool context_free() const = 0;
  /// Optimal policy; only meaningful for context-free worlds.
  virtual Policy best_policy() const = 0;
};

class BanditWorld final : public World {
 public:
  BanditWorld(LinearBandit env, std::unique_ptr<BanditAdversary> adversary);
  Context begin_round(int t, Rng& rng) override;
  RoundOutcome play(const Policy& pi, Rng& rng) override;
  double c_max() const override { return 1.0; }
  bool context_free() const override { return true; }
  Policy best_policy() const override { return Policy::arm(best_); }
  const LinearBandit& env() const { return env_; }

 private:
  LinearBandit env_;
  std::unique_ptr<BanditAdversary> adversary_;
  std::vector<double> clean_;
  std::vector<double> corrupted_;
  int best_ = 0;
  int t_ = 0;
  Context ctx_;
  PublicHistory history_;
};

class ContextualWorld final : public World {
 public:
  ContextualWorld(ContextualBandit env, std::unique_ptr<BanditAdversary> adversary);
  Context begin_round(int t, Rng& rng) override;
  RoundOutcome play(const Policy& pi, Rng& rng) override;
  double c_max() const override { return 1.0; }
  bool context_free() const override { return false; }
  Policy best_policy() const override;

 private:
  ContextualBandit env_;
  std::unique_ptr<BanditAdversary> adversary_;
  std::vector<double> clean_;
  std::vector<double> corrupted_;
  int t_ = 0;
  Context ctx_;
  PublicHistory history_;
};

class MdpWorld final : public World {
 public:
  MdpWorld(TabularMdp env, std::unique_ptr<MdpAdversary> adversary);
  Context begin_round(int t, Rng& rng) override;
  RoundOutcome play(const Policy& pi, Rng& rng) override;
  double c_max() const override { return env_.c_max(); }
  bool context_free() const override { return true; }
  Policy best_policy() const override { return optimal_.policy; }
  const TabularMdp& env() const { return env_; }

 private:
  TabularMdp env_;
  std::unique_ptr<MdpAdversary> adversary_;
  OptimalSolution optimal_;
  Kernel corrupted_;
  int t_ = 0;
  Context ctx_;
  PublicHistory history_;
};

}  // namespace cobe
