#include "cobe/ucbvi.hpp"

#include <algorithm>
#include <cmath>

namespace cobe {

double ucbvi_bonus(double n, double theta, const MdpShape& shape, double horizon, double delta) {
  if (n <= 0.0) return 1.0;
  const double log_term =
      std::log(64.0 * shape.S * shape.A * shape.H * horizon * horizon / delta);
  return std::min(2.0 * std::sqrt(2.0 * log_term / n) + theta / n, 1.0);
}

RobustUcbvi::RobustUcbvi(MdpShape shape, double horizon, double delta, double theta, RegretProfile profile,
                         std::optional<Policy> excluded)
    : shape_(shape),
      horizon_(horizon),
      delta_(delta),
      theta_(theta),
      profile_(profile),
      excluded_(std::move(excluded)) {
  require(shape.S >= 1 && shape.A >= 1 && shape.H >= 1, "UCBVI needs S, A, H >= 1");
  require(theta >= 0.0, "theta must be nonnegative");
  const std::size_t pairs = static_cast<std::size_t>(shape.S) * shape.A;
  n_.assign(pairs, 0.0);
  n_next_.assign(pairs * shape.S, 0.0);
  reward_.assign(pairs, 0.0);
  if (excluded_) {
    require(excluded_->actions.size() == static_cast<std::size_t>(shape.H) * shape.S,
            "excluded policy has the wrong size");
    require(shape.A >= 2, "excluding the only policy leaves nothing to play");
  }
}

double RobustUcbvi::bonus(int s, int a) const { return ucbvi_bonus(n_[pair(s, a)], theta_, shape_, horizon_, delta_); }

double RobustUcbvi::plan(int s_start, int h_ban, int s_ban, int a_ban, Policy& out,
                         std::vector<double>* q_out) const {
  const int S = shape_.S, A = shape_.A, H = shape_.H;
  out.actions.assign(static_cast<std::size_t>(H) * S, 0);
  if (q_out) q_out->assign(static_cast<std::size_t>(H) * S * A, 0.0);
  std::vector<double> next(S, 0.0), cur(S, 0.0);
  for (int h = H - 1; h >= 0; --h) {
    for (int s = 0; s < S; ++s) {
      double best = -1.0;
      int best_a = -1;
      for (int a = 0; a < A; ++a) {
        if (h == h_ban && s == s_ban && a == a_ban) continue;
        const std::size_t i = pair(s, a);
        double q = 1.0;
        if (n_[i] > 0.0) {
          double backup = reward_[i];
          for (int y = 0; y < S; ++y) backup += n_next_[i * S + y] * next[y];
          q = std::min(backup / n_[i] + bonus(s, a), 1.0);
        }
        if (q_out) (*q_out)[(static_cast<std::size_t>(h) * S + s) * A + a] = q;
        if (best_a < 0 || q > best) {
          best = q;
          best_a = a;
        }
      }
      cur[s] = best;
      out.actions[static_cast<std::size_t>(h) * S + s] = best_a;
    }
    std::swap(cur, next);
  }
  return next[s_start];
}

Policy RobustUcbvi::select(const Context& ctx, Rng&) {
  const int s1 = ctx.initial_state;
  Policy best;
  if (!excluded_) {
    planned_value_ = plan(s1, -1, -1, -1, best, &q_);
    return best;
  }
  double best_value = -1.0;
  Policy candidate;
  for (int h = 0; h < shape_.H; ++h)
    for (int s = 0; s < shape_.S; ++s) {
      const int banned = excluded_->actions[static_cast<std::size_t>(h) * shape_.S + s];
      const double v = plan(s1, h, s, banned, candidate, nullptr);
      if (best.actions.empty() || v > best_value) {
        best_value = v;
        best = candidate;
      }
    }
  planned_value_ = best_value;
  require(best != *excluded_, "excluded-policy planner returned the excluded policy");
  return best;
}

void RobustUcbvi::update(const Feedback& fb) {
  for (const Step& st : fb.steps) {
    require(st.state >= 0 && st.state < shape_.S && st.action >= 0 && st.action < shape_.A &&
                st.next_state >= 0 && st.next_state < shape_.S,
            "trajectory step out of range");
    const std::size_t i = pair(st.state, st.action);
    n_[i] += 1.0;
    reward_[i] += st.reward;
    n_next_[i * shape_.S + st.next_state] += 1.0;
  }
}

RegretProfile ucbvi_profile(const MdpShape& shape, double horizon, double delta, double kappa) {
  const double SA = static_cast<double>(shape.S) * shape.A;
  const double H = shape.H;
  const double log_term = std::log(SA * horizon / delta);
  RegretProfile p;
  p.beta1 = H * H * H * SA * log_term;
  p.beta2 = H * SA * log_term;
  p.beta3 = H * H * H * shape.S * SA * log_term;
  p.ctype = CorruptionType::A;
  p.gap_form = true;
  return with_gap_floors(p.scaled(kappa), horizon, delta);
}

UcbviFactory::UcbviFactory(MdpShape shape, double horizon, double delta, double kappa,
                           std::optional<Policy> excluded)
    : shape_(shape),
      horizon_(horizon),
      delta_(delta),
      kappa_(kappa),
      profile_(ucbvi_profile(shape, horizon, delta, kappa)),
      excluded_(std::move(excluded)) {
  require(horizon >= 1.0 && delta > 0.0 && delta < 1.0, "need T >= 1 and delta in (0, 1)");
}

std::unique_ptr<Learner> UcbviFactory::make(double theta) const {
  return std::make_unique<RobustUcbvi>(shape_, horizon_, delta_, theta, profile_, excluded_);
}

std::shared_ptr<const BaseFactory> UcbviFactory::excluding(const Policy& pihat) const {
  require(!excluded_, "UCBVI factory already excludes a policy");
  require(pihat.actions.size() == static_cast<std::size_t>(shape_.H) * shape_.S,
          "excluded policy has the wrong size");
  require(shape_.A >= 2, "policy set would be empty after exclusion");
  return std::make_shared<UcbviFactory>(shape_, horizon_, delta_, kappa_, pihat);
}

}  // namespace cobe
