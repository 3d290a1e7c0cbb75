#include "cobe/phased_elimination.hpp"

#include <algorithm>
#include <cmath>

namespace cobe {

double pe_threshold(int d, double m_k, int m0, double theta, double horizon, double delta) {
  return 4.0 * d * std::sqrt(std::log(horizon / delta) / m_k) + 4.0 * std::sqrt(2.0 * d) * m0 * theta / m_k;
}

std::vector<int> pe_eliminate(std::span<const Vec> actions, const Vec& w, double threshold) {
  require(!actions.empty(), "elimination needs a nonempty active set");
  std::vector<double> score(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i) score[i] = w.dot(actions[i]);
  const double top = *std::max_element(score.begin(), score.end());
  std::vector<int> keep;
  for (std::size_t i = 0; i < actions.size(); ++i)
    if (top - score[i] <= threshold) keep.push_back(static_cast<int>(i));
  return keep;
}

RobustPhasedElimination::RobustPhasedElimination(std::vector<Vec> arms, std::vector<int> ids, double horizon,
                                                 double delta, double theta, RegretProfile profile)
    : arms_(std::move(arms)),
      ids_(std::move(ids)),
      horizon_(horizon),
      delta_(delta),
      theta_(theta),
      profile_(profile) {
  require(!arms_.empty(), "phased elimination needs at least one arm");
  require(ids_.size() == arms_.size(), "one id per arm");
  require(theta >= 0.0, "theta must be nonnegative");
  d_ = static_cast<int>(arms_.front().size());
  m0_ = pe_m0(d_);
  active_.resize(arms_.size());
  for (std::size_t i = 0; i < arms_.size(); ++i) active_[i] = static_cast<int>(i);
  start_phase();
}

double RobustPhasedElimination::m_k() const { return std::ldexp(static_cast<double>(m0_), phase_ - 1); }

void RobustPhasedElimination::start_phase() {
  ++phase_;
  std::vector<int> ids;
  for (int i : active_) ids.push_back(ids_[i]);
  active_history_.push_back(std::move(ids));

  std::vector<Vec> acts;
  for (int i : active_) acts.push_back(arms_[i]);
  const Design design = compute_design(acts, m0_);
  const auto u = pe_schedule(design.weights, m_k(), m0_);

  // Round-robin over the support so a phase cut short by the horizon still
  // samples every supported arm evenly.
  pulls_.clear();
  next_ = 0;
  std::vector<long long> left = u;
  bool any = true;
  while (any) {
    any = false;
    for (std::size_t j = 0; j < left.size(); ++j)
      if (left[j] > 0) {
        pulls_.push_back(active_[j]);
        --left[j];
        any = true;
      }
  }
  require(!pulls_.empty(), "phase schedules no pulls");
  gamma_ = Mat::Zero(d_, d_);
  target_ = Vec::Zero(d_);
}

void RobustPhasedElimination::finish_phase() {
  const Vec w = pinv_psd(gamma_) * target_;
  std::vector<Vec> acts;
  for (int i : active_) acts.push_back(arms_[i]);
  const auto keep = pe_eliminate(acts, w, pe_threshold(d_, m_k(), m0_, theta_, horizon_, delta_));
  std::vector<int> next;
  for (int j : keep) next.push_back(active_[j]);
  active_ = std::move(next);
  start_phase();
}

Policy RobustPhasedElimination::select(const Context&, Rng&) { return Policy::arm(ids_[pulls_[next_]]); }

void RobustPhasedElimination::update(const Feedback& fb) {
  const int i = pulls_[next_];
  require(fb.policy == Policy::arm(ids_[i]), "feedback does not match the scheduled pull");
  gamma_.noalias() += arms_[i] * arms_[i].transpose();
  target_ += arms_[i] * fb.reward;
  if (++next_ == pulls_.size()) finish_phase();
}

RegretProfile pe_profile(int d, double horizon, double delta, double kappa) {
  const double log_td = std::log(horizon / delta);
  RegretProfile p;
  p.beta1 = static_cast<double>(d) * d * log_td;
  p.beta2 = std::pow(static_cast<double>(d), 1.5) * std::log(horizon);
  p.beta3 = d * log_td;
  p.ctype = CorruptionType::A;
  p.gap_form = true;
  return with_gap_floors(p.scaled(kappa), horizon, delta);
}

PeFactory::PeFactory(std::vector<Vec> arms, std::vector<int> ids, double horizon, double delta, double kappa)
    : arms_(std::move(arms)), ids_(std::move(ids)), horizon_(horizon), delta_(delta), kappa_(kappa) {
  require(!arms_.empty(), "phased elimination needs at least one arm");
  require(horizon >= 1.0 && delta > 0.0 && delta < 1.0, "need T >= 1 and delta in (0, 1)");
  if (ids_.empty())
    for (std::size_t i = 0; i < arms_.size(); ++i) ids_.push_back(static_cast<int>(i));
  profile_ = pe_profile(static_cast<int>(arms_.front().size()), horizon, delta, kappa);
}

std::unique_ptr<Learner> PeFactory::make(double theta) const {
  return std::make_unique<RobustPhasedElimination>(arms_, ids_, horizon_, delta_, theta, profile_);
}

std::shared_ptr<const BaseFactory> PeFactory::excluding(const Policy& pihat) const {
  require(pihat.actions.size() == 1, "bandit policy must name one arm");
  std::vector<Vec> arms;
  std::vector<int> ids;
  bool found = false;
  for (std::size_t i = 0; i < arms_.size(); ++i) {
    if (ids_[i] == pihat.actions[0]) {
      found = true;
      continue;
    }
    arms.push_back(arms_[i]);
    ids.push_back(ids_[i]);
  }
  require(found, "excluded arm is not in the policy set");
  require(!arms.empty(), "policy set would be empty after exclusion");
  auto out = std::make_shared<PeFactory>(std::move(arms), std::move(ids), horizon_, delta_, kappa_);
  return out;
}

}  // namespace cobe
