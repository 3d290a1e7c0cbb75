#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "cobe/basic.hpp"
#include "cobe/cobe.hpp"
#include "cobe/two_model_select.hpp"

namespace cobe {

/// 10^4 (2 beta1 + 42 beta2 c_max ln(T/delta) + 2 beta3).
double gcobe_beta4(const RegretProfile& p, double c_max, double horizon, double delta);

/// max{ceil(log2((sqrt(beta1) + beta2 c_max + beta3) / beta2)), 0}.
int gcobe_k_init(const RegretProfile& p, double c_max);

/// Smallest integer L >= 1 with sqrt(beta4 L) >= beta2 2^k.
long long gcobe_length(double beta4, double beta2, int k);

/// Three-phase gap-adaptive wrapper. Phase 1 is BASIC(k, L) with the capped
/// weights; on success the policy ALG_k played most becomes pihat and Phase 2
/// defends it with TwoModelSelect against COBE over the other policies. An
/// early return from Phase 2 or an elimination in Phase 1 moves to k + 1.
/// Once L exceeds T the rest of the run is plain COBE (Phase 3).
class Gcobe final : public Learner {
 public:
  Gcobe(std::shared_ptr<const BaseFactory> base, double c_max, BasicOptions options = {});

  Policy select(const Context& ctx, Rng& rng) override;
  void update(const Feedback& fb) override;
  RegretProfile profile() const override { return base_->profile(); }
  RoundTag tag() const override;

  int phase() const { return phase_; }
  int k() const { return k_; }
  double beta4() const { return beta4_; }
  long long length() const { return length_; }
  const std::optional<Policy>& pihat() const { return pihat_; }
  const std::vector<MetaEvent>& events() const { return events_; }
  const Basic* basic() const { return basic_.get(); }
  const TwoModelSelect* tms() const { return tms_.get(); }
  /// Epoch records of every TwoModelSelect run so far.
  std::vector<TmsEpoch> tms_epochs() const;

 private:
  void enter_phase1(int k);

  std::shared_ptr<const BaseFactory> base_;
  double c_max_;
  BasicOptions options_;
  double beta4_;
  int phase_ = 1;
  int k_ = 0;
  long long length_ = 0;
  long long t_ = 0;
  std::optional<Policy> pihat_;
  std::unique_ptr<Basic> basic_;
  std::unique_ptr<TwoModelSelect> tms_;
  std::unique_ptr<Cobe> cobe_;
  std::vector<TmsEpoch> finished_epochs_;
  std::vector<MetaEvent> events_;
};

}  // namespace cobe
