#include "cobe/gcobe.hpp"

#include <algorithm>
#include <cmath>

#include "cobe/leave_one_out.hpp"

namespace cobe {

double gcobe_beta4(const RegretProfile& p, double c_max, double horizon, double delta) {
  return 1e4 * (2.0 * p.beta1 + 42.0 * p.beta2 * c_max * std::log(horizon / delta) + 2.0 * p.beta3);
}

int gcobe_k_init(const RegretProfile& p, double c_max) {
  const double ratio = (std::sqrt(p.beta1) + p.beta2 * c_max + p.beta3) / p.beta2;
  return std::max(static_cast<int>(std::ceil(std::log2(ratio))), 0);
}

long long gcobe_length(double beta4, double beta2, int k) {
  require(beta4 > 0.0 && beta2 > 0.0 && k >= 0, "L needs beta4 > 0, beta2 > 0, k >= 0");
  const double target = beta2 * std::ldexp(1.0, k);
  auto ok = [&](long long l) { return std::sqrt(beta4 * static_cast<double>(l)) >= target; };
  long long l = std::max(1LL, static_cast<long long>(std::ceil(target * target / beta4)));
  while (l > 1 && ok(l - 1)) --l;
  while (!ok(l)) ++l;
  return l;
}

Gcobe::Gcobe(std::shared_ptr<const BaseFactory> base, double c_max, BasicOptions options)
    : base_(std::move(base)), c_max_(c_max), options_(options) {
  require(static_cast<bool>(base_), "G-COBE needs a base factory");
  const RegretProfile p = base_->profile();
  require(p.gap_form, "G-COBE needs a base learner with a gap-form guarantee");
  require(p.ctype == CorruptionType::A, "G-COBE needs a type-a base learner");
  validate(p, base_->horizon(), base_->delta());
  beta4_ = gcobe_beta4(p, c_max_, base_->horizon(), base_->delta());
  enter_phase1(gcobe_k_init(p, c_max_));
}

void Gcobe::enter_phase1(int k) {
  k_ = k;
  basic_.reset();
  if (tms_) {
    const auto& e = tms_->epochs();
    finished_epochs_.insert(finished_epochs_.end(), e.begin(), e.end());
    tms_.reset();
  }
  length_ = gcobe_length(beta4_, base_->profile().beta2, k);
  if (static_cast<double>(length_) > base_->horizon()) {
    phase_ = 3;
    events_.push_back({t_, "phase3", static_cast<double>(k)});
    cobe_ = std::make_unique<Cobe>(base_, c_max_, options_);
    return;
  }
  phase_ = 1;
  events_.push_back({t_, "phase1", static_cast<double>(k)});
  const RegretProfile p = base_->profile();
  const double length = static_cast<double>(length_);
  AlphaRule rule = [length, p](int kk, int k_max) { return gcobe_alpha(kk, k_max, length, p.beta1, p.beta2); };
  basic_ = std::make_unique<Basic>(*base_, k, length_, c_max_, rule, options_);
}

Policy Gcobe::select(const Context& ctx, Rng& rng) {
  switch (phase_) {
    case 1:
      return basic_->select(ctx, rng);
    case 2:
      return tms_->select(ctx, rng);
    default:
      return cobe_->select(ctx, rng);
  }
}

void Gcobe::update(const Feedback& fb) {
  ++t_;
  if (phase_ == 1) {
    if (!basic_->update(fb)) {
      events_.push_back({t_, "eliminate", static_cast<double>(k_)});
      enter_phase1(k_ + 1);
      return;
    }
    if (basic_->finished()) {
      pihat_ = basic_->most_played();
      require(pihat_.has_value(), "BASIC finished without playing");
      phase_ = 2;
      events_.push_back({t_, "phase2", static_cast<double>(k_)});
      tms_ = std::make_unique<TwoModelSelect>(static_cast<double>(length_), beta4_, base_->horizon(), *pihat_,
                                              excluding_learner_maker(base_, *pihat_, c_max_),
                                              base_->profile());
      basic_.reset();
    }
    return;
  }
  if (phase_ == 2) {
    tms_->update(fb);
    if (tms_->finished()) {
      events_.push_back({t_, "tms_return", static_cast<double>(tms_->epoch())});
      enter_phase1(k_ + 1);
    }
    return;
  }
  cobe_->update(fb);
}

RoundTag Gcobe::tag() const {
  switch (phase_) {
    case 1:
      return {1, k_, basic_ ? basic_->choice() : -1};
    case 2:
      return {2, tms_->epoch(), tms_->tag().choice};
    default:
      return {3, cobe_->k(), cobe_->basic().choice()};
  }
}

std::vector<TmsEpoch> Gcobe::tms_epochs() const {
  std::vector<TmsEpoch> out = finished_epochs_;
  if (tms_) out.insert(out.end(), tms_->epochs().begin(), tms_->epochs().end());
  return out;
}

}  // namespace cobe
