#pragma once

#include <memory>
#include <vector>

#include "cobe/basic.hpp"

namespace cobe {

/// max{ceil(log2((sqrt(beta1 T) + beta2 Z + beta3) / beta2)), 0} with Z = c_max
/// for type-a profiles and Z = c_max sqrt(T) for type-r.
int cobe_k_init(const RegretProfile& p, double horizon, double c_max);

/// Restarts BASIC (L = T, halving weights) with k + 1 whenever the check fires.
class Cobe final : public Learner {
 public:
  Cobe(std::shared_ptr<const BaseFactory> factory, double c_max, BasicOptions options = {});

  Policy select(const Context& ctx, Rng& rng) override;
  void update(const Feedback& fb) override;
  /// The base profile in gap-free form.
  RegretProfile profile() const override { return factory_->profile().gap_free(); }
  RoundTag tag() const override { return {1, basic_->k(), basic_->choice()}; }

  int k() const { return basic_->k(); }
  int k_init() const { return k_init_; }
  const Basic& basic() const { return *basic_; }
  const std::vector<MetaEvent>& events() const { return events_; }

 private:
  void start(int k);

  std::shared_ptr<const BaseFactory> factory_;
  double c_max_;
  BasicOptions options_;
  int k_init_;
  std::unique_ptr<Basic> basic_;
  long long t_ = 0;
  std::vector<MetaEvent> events_;
};

}  // namespace cobe
