#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "cobe/basic.hpp"

namespace cobe {

/// ceil(3 (log2 T)^2), at least 1.
int tms_max_epochs(double horizon);

struct TmsEpoch {
  int j = 0;
  long long start = 0;    // t_j
  long long length = 0;   // rounds played in the epoch
  double gap = 0.0;       // Delta_j
  double budget = 0.0;    // M_j
  double p = 0.0;
  int outcome = 0;        // -1 shrink, +1 grow, 0 ran to M_j
};

using LearnerMaker = std::function<std::unique_ptr<Learner>()>;

/// Two-option selector between a fixed policy pihat and a learner B over the
/// remaining policies. B's profile is read in gap-free form.
class TwoModelSelect final : public Learner {
 public:
  TwoModelSelect(double length, double beta4, double horizon, Policy pihat, LearnerMaker make_b,
                 RegretProfile b_profile);

  Policy select(const Context& ctx, Rng& rng) override;
  void update(const Feedback& fb) override;
  RegretProfile profile() const override { return b_profile_; }
  RoundTag tag() const override { return {2, j_, y_}; }

  /// True once the procedure has returned (gap estimate fell below the first
  /// one, or the epoch budget is spent).
  bool finished() const { return finished_; }
  int epoch() const { return j_; }
  double gap_estimate() const { return gap_; }
  double budget() const { return m_; }
  double p() const { return p_; }
  double r0() const { return r0_ / (1.0 - p_); }
  double r1() const { return r1_ / p_; }
  const std::vector<TmsEpoch>& epochs() const { return epochs_; }
  const Policy& pihat() const { return pihat_; }

 private:
  void start_epoch();
  void end_epoch(double next_gap, int outcome);
  double bound_b(double t, double c) const;

  double length_;
  double beta4_;
  Policy pihat_;
  LearnerMaker make_b_;
  RegretProfile b_profile_;
  int max_epochs_;
  double gap1_;
  double gap_;
  double m_;
  double p_ = 0.5;
  int j_ = 0;
  long long t_ = 1;
  long long t_j_ = 1;
  double r0_ = 0.0;  // raw sums; scaled on use
  double r1_ = 0.0;
  int y_ = 0;
  bool pending_ = false;
  bool finished_ = false;
  std::unique_ptr<Learner> b_;
  std::vector<TmsEpoch> epochs_;
};

}  // namespace cobe
