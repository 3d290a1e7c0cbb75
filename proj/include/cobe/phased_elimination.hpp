#pragma once

#include <memory>
#include <span>
#include <vector>

#include "cobe/core.hpp"
#include "cobe/design.hpp"

namespace cobe {

/// 4d sqrt(ln(T/delta) / m_k) + 4 sqrt(2d) m0 theta / m_k.
double pe_threshold(int d, double m_k, int m0, double theta, double horizon, double delta);

/// Indices (into `actions`) of the actions a with max_{a'} w^T (a' - a) <= threshold.
std::vector<int> pe_eliminate(std::span<const Vec> actions, const Vec& w, double threshold);

/// Phased elimination with optimal-design exploration and the corruption
/// term in the elimination threshold. Arms keep their caller-side ids.
class RobustPhasedElimination final : public Learner {
 public:
  RobustPhasedElimination(std::vector<Vec> arms, std::vector<int> ids, double horizon, double delta,
                          double theta, RegretProfile profile);

  Policy select(const Context& ctx, Rng& rng) override;
  void update(const Feedback& fb) override;
  RegretProfile profile() const override { return profile_; }

  int phase() const { return phase_; }
  int m0() const { return m0_; }
  double m_k() const;
  /// Caller-side ids of the active set at the start of every phase so far.
  const std::vector<std::vector<int>>& active_history() const { return active_history_; }

 private:
  void start_phase();
  void finish_phase();

  std::vector<Vec> arms_;
  std::vector<int> ids_;
  double horizon_;
  double delta_;
  double theta_;
  RegretProfile profile_;
  int d_;
  int m0_;
  int phase_ = -1;
  std::vector<int> active_;  // indices into arms_
  std::vector<int> pulls_;   // this phase's pull order, indices into arms_
  std::size_t next_ = 0;
  Mat gamma_;
  Vec target_;
  std::vector<std::vector<int>> active_history_;
};

RegretProfile pe_profile(int d, double horizon, double delta, double kappa);

class PeFactory final : public BaseFactory {
 public:
  PeFactory(std::vector<Vec> arms, std::vector<int> ids, double horizon, double delta, double kappa);
  std::unique_ptr<Learner> make(double theta) const override;
  RegretProfile profile() const override { return profile_; }
  double horizon() const override { return horizon_; }
  double delta() const override { return delta_; }
  std::shared_ptr<const BaseFactory> excluding(const Policy& pihat) const override;

 private:
  std::vector<Vec> arms_;
  std::vector<int> ids_;
  double horizon_;
  double delta_;
  double kappa_;
  RegretProfile profile_;
};

}  // namespace cobe
