#pragma once

#include <memory>
#include <optional>

#include "cobe/core.hpp"
#include "cobe/tabular_mdp.hpp"

namespace cobe {

struct MdpShape {
  int S = 1;
  int A = 1;
  int H = 1;
  int s1 = 0;
};

/// min{2 sqrt(2 ln(64 S A H T^2 / delta) / n) + theta / n, 1}; n = 0 gives 1.
double ucbvi_bonus(double n, double theta, const MdpShape& shape, double horizon, double delta);

/// UCBVI with the enlarged bonus. Samples are pooled over layers (the MDP is
/// layer-independent). With an excluded policy pihat it plans over all
/// policies except pihat: for every (h, s) it solves the problem in which
/// pihat's action at (h, s) is forbidden and keeps the best of those.
class RobustUcbvi final : public Learner {
 public:
  RobustUcbvi(MdpShape shape, double horizon, double delta, double theta, RegretProfile profile,
              std::optional<Policy> excluded = std::nullopt);

  Policy select(const Context& ctx, Rng& rng) override;
  void update(const Feedback& fb) override;
  RegretProfile profile() const override { return profile_; }

  /// Optimistic value of the last plan at its start state.
  double planned_value() const { return planned_value_; }
  double bonus(int s, int a) const;
  double visits(int s, int a) const { return n_[pair(s, a)]; }
  /// Q table of the last unrestricted plan, q[(h * S + s) * A + a].
  const std::vector<double>& q_table() const { return q_; }

 private:
  std::size_t pair(int s, int a) const { return static_cast<std::size_t>(s) * shape_.A + a; }
  /// Backward induction with (h_ban, s_ban, a_ban) forbidden (h_ban < 0: none).
  double plan(int s_start, int h_ban, int s_ban, int a_ban, Policy& out, std::vector<double>* q_out) const;

  MdpShape shape_;
  double horizon_;
  double delta_;
  double theta_;
  RegretProfile profile_;
  std::optional<Policy> excluded_;
  std::vector<double> n_;        // visits per (s, a)
  std::vector<double> n_next_;   // visits per (s, a, s')
  std::vector<double> reward_;   // reward sum per (s, a)
  std::vector<double> q_;
  double planned_value_ = 0.0;
};

RegretProfile ucbvi_profile(const MdpShape& shape, double horizon, double delta, double kappa);

class UcbviFactory final : public BaseFactory {
 public:
  UcbviFactory(MdpShape shape, double horizon, double delta, double kappa,
               std::optional<Policy> excluded = std::nullopt);
  std::unique_ptr<Learner> make(double theta) const override;
  RegretProfile profile() const override { return profile_; }
  double horizon() const override { return horizon_; }
  double delta() const override { return delta_; }
  std::shared_ptr<const BaseFactory> excluding(const Policy& pihat) const override;

 private:
  MdpShape shape_;
  double horizon_;
  double delta_;
  double kappa_;
  RegretProfile profile_;
  std::optional<Policy> excluded_;
};

}  // namespace cobe
