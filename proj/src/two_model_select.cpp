#include "cobe/two_model_select.hpp"

#include <algorithm>
#include <cmath>

namespace cobe {

int tms_max_epochs(double horizon) {
  const double lg = horizon > 1.0 ? std::log2(horizon) : 0.0;
  return std::max(1, static_cast<int>(std::ceil(3.0 * lg * lg)));
}

TwoModelSelect::TwoModelSelect(double length, double beta4, double horizon, Policy pihat, LearnerMaker make_b,
                               RegretProfile b_profile)
    : length_(length),
      beta4_(beta4),
      pihat_(std::move(pihat)),
      make_b_(std::move(make_b)),
      b_profile_(b_profile.gap_free()),
      max_epochs_(tms_max_epochs(horizon)) {
  require(length >= 1.0 && beta4 > 0.0, "TwoModelSelect needs L >= 1 and beta4 > 0");
  require(static_cast<bool>(make_b_), "TwoModelSelect needs a learner for the other policies");
  gap1_ = std::min(std::sqrt(beta4_ / length_), 1.0);
  gap_ = gap1_;
  m_ = beta4_ / (gap_ * gap_);
  start_epoch();
}

double TwoModelSelect::bound_b(double t, double c) const {
  return std::sqrt(b_profile_.beta1 * t) + b_profile_.beta2 * c + b_profile_.beta3;
}

void TwoModelSelect::start_epoch() {
  ++j_;
  require(j_ <= max_epochs_, "TwoModelSelect exceeded its epoch budget");
  require(gap_ <= 1.0, "TwoModelSelect invariant: gap estimate above 1");
  t_j_ = t_;
  p_ = beta4_ / (2.0 * m_ * gap_ * gap_);
  require(p_ > 0.0 && p_ <= 0.5 + 1e-12, "TwoModelSelect invariant: p_j outside (0, 1/2]");
  r0_ = 0.0;
  r1_ = 0.0;
  b_ = make_b_();
  epochs_.push_back({j_, t_j_, 0, gap_, m_, p_, 0});
}

void TwoModelSelect::end_epoch(double next_gap, int outcome) {
  TmsEpoch& e = epochs_.back();
  e.length = t_ - t_j_;
  e.outcome = outcome;
  if (next_gap < gap1_) {
    finished_ = true;
    return;
  }
  const double next_m = 2.0 * static_cast<double>(t_ - t_j_) + beta4_ / (next_gap * next_gap);
  require(next_m >= 2.0 * static_cast<double>(e.length), "TwoModelSelect invariant: M_{j+1} < 2 x epoch length");
  gap_ = next_gap;
  m_ = next_m;
  if (j_ >= max_epochs_) {
    finished_ = true;
    return;
  }
  start_epoch();
}

Policy TwoModelSelect::select(const Context& ctx, Rng& rng) {
  require(!finished_, "TwoModelSelect has already returned");
  y_ = rng.bernoulli(p_) ? 1 : 0;
  pending_ = true;
  return y_ == 1 ? b_->select(ctx, rng) : pihat_;
}

void TwoModelSelect::update(const Feedback& fb) {
  require(pending_, "TwoModelSelect update without a matching select");
  pending_ = false;
  if (y_ == 1) {
    b_->update(fb);
    r1_ += fb.reward;
  } else {
    r0_ += fb.reward;
  }
  ++t_;
  epochs_.back().length = t_ - t_j_;
  const double n = static_cast<double>(t_ - t_j_);
  const double hat0 = r0_ / (1.0 - p_);
  const double hat1 = r1_ / p_;
  const double c = p_ * std::sqrt(b_profile_.beta1 * length_) / b_profile_.beta2;
  if (hat0 <= hat1 + 0.5 * n * gap_ - (5.0 / p_) * bound_b(p_ * n, c)) {
    end_epoch(gap_ / 1.25, -1);
    return;
  }
  if (hat0 >= hat1 + 3.0 * m_ * gap_ + 8.0 * std::sqrt(b_profile_.beta1 * length_)) {
    end_epoch(1.25 * gap_, +1);
    return;
  }
  if (static_cast<double>(t_) > static_cast<double>(t_j_) + m_ - 1.0) end_epoch(gap_, 0);
}

}  // namespace cobe
