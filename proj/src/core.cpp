#include "cobe/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cobe {

namespace {
constexpr double kRangeSlack = 1e-12;
}

CorruptionLedger::CorruptionLedger(double c_max) : c_max_(c_max) {
  require(c_max > 0.0, "c_max must be positive");
}

void CorruptionLedger::accumulate(double c) {
  if (!(c >= 0.0) || c > c_max_ + kRangeSlack) {
    std::ostringstream os;
    os << "adversary contract violation: c_t = " << c << " outside [0, " << c_max_ << "]";
    throw ContractError(os.str());
  }
  per_round_.push_back(c);
  sum_ += c;
  sum_sq_ += c * c;
  max_ = std::max(max_, c);
}

double CorruptionLedger::agg_r() const {
  return std::sqrt(static_cast<double>(per_round_.size()) * sum_sq_);
}

const char* to_string(CorruptionType t) { return t == CorruptionType::A ? "a" : "r"; }

void validate(const RegretProfile& p, double horizon, double delta) {
  require(p.beta1 >= 1.0 && p.beta2 >= 1.0 && p.beta3 >= 1.0, "regret profile needs beta_i >= 1");
  if (!p.gap_form) return;
  const double log_term = std::log(horizon / delta);
  require(p.beta1 >= 16.0 * log_term, "gap-form profile needs beta1 >= 16 ln(T/delta)");
  require(p.beta3 >= 10.0 * std::sqrt(p.beta1 * log_term),
          "gap-form profile needs beta3 >= 10 sqrt(beta1 ln(T/delta))");
}

RegretProfile with_gap_floors(RegretProfile p, double horizon, double delta) {
  const double log_term = std::log(horizon / delta);
  p.beta1 = std::max({p.beta1, 16.0 * log_term, 1.0});
  p.beta2 = std::max(p.beta2, 1.0);
  p.beta3 = std::max({p.beta3, 10.0 * std::sqrt(p.beta1 * log_term), 1.0});
  return p;
}

double eval_regret_bound(const RegretProfile& p, double t, double theta, std::optional<double> gap) {
  require(t >= 0.0 && theta >= 0.0, "regret bound needs t >= 0 and theta >= 0");
  double leading = std::sqrt(p.beta1 * t);
  if (p.gap_form) {
    require(gap.has_value(), "gap-form regret bound evaluated without a gap");
    require(*gap > 0.0 && *gap <= 1.0, "gap must lie in (0, 1]");
    leading = std::min(leading, p.beta1 / *gap);
  }
  return std::max(leading + p.beta2 * theta + p.beta3, theta);
}

void RegretLedger::record(double mu_star, double mu_chosen) {
  const double gap = mu_star - mu_chosen;
  gaps_.push_back(gap);
  cum_ += gap;
}

std::string Policy::id() const {
  std::string out;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(actions[i]);
  }
  return out;
}

}  // namespace cobe
