#include "cobe/cobe.hpp"

#include <algorithm>
#include <cmath>

namespace cobe {

int cobe_k_init(const RegretProfile& p, double horizon, double c_max) {
  const double z = p.ctype == CorruptionType::A ? c_max : c_max * std::sqrt(horizon);
  const double ratio = (std::sqrt(p.beta1 * horizon) + p.beta2 * z + p.beta3) / p.beta2;
  return std::max(static_cast<int>(std::ceil(std::log2(ratio))), 0);
}

Cobe::Cobe(std::shared_ptr<const BaseFactory> factory, double c_max, BasicOptions options)
    : factory_(std::move(factory)), c_max_(c_max), options_(options) {
  require(static_cast<bool>(factory_), "COBE needs a base factory");
  k_init_ = cobe_k_init(factory_->profile(), factory_->horizon(), c_max_);
  start(k_init_);
}

void Cobe::start(int k) {
  const long long length = std::max(1LL, static_cast<long long>(std::llround(factory_->horizon())));
  basic_ = std::make_unique<Basic>(*factory_, k, length, c_max_, cobe_alpha, options_);
  events_.push_back({t_, "basic_start", static_cast<double>(k)});
}

Policy Cobe::select(const Context& ctx, Rng& rng) {
  // L = T, so this only happens when the caller runs past the horizon.
  if (basic_->finished()) start(basic_->k());
  return basic_->select(ctx, rng);
}

void Cobe::update(const Feedback& fb) {
  ++t_;
  const bool ok = basic_->update(fb);
  if (!ok) {
    events_.push_back({t_, "eliminate", static_cast<double>(basic_->k())});
    start(basic_->k() + 1);
  }
}

}  // namespace cobe
