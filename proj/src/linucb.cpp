#include "cobe/linucb.hpp"

#include <algorithm>
#include <cmath>

namespace cobe {

double linucb_zeta(const LinUcbSpec& spec, double horizon, double delta, double zeta0) {
  const double d = spec.d;
  if (spec.H == 1) return zeta0 * std::sqrt(d * std::log(d * horizon / delta));
  return zeta0 * d * std::sqrt(std::log(d * spec.H * horizon / delta));
}

RobustLinUcb::RobustLinUcb(LinUcbSpec spec, double horizon, double delta, double theta, double zeta0,
                           RegretProfile profile)
    : spec_(std::move(spec)), horizon_(horizon), delta_(delta), theta_(theta), profile_(profile) {
  require(spec_.d >= 1 && spec_.H >= 1, "LinUCB needs d >= 1 and H >= 1");
  require(theta >= 0.0 && zeta0 >= 0.0, "theta and zeta0 must be nonnegative");
  zeta_ = linucb_zeta(spec_, horizon, delta, zeta0);
  lambda_ = Mat::Identity(spec_.d, spec_.d);
  target_ = Vec::Zero(spec_.d);
  if (spec_.episodic()) {
    require(spec_.A >= 1, "episodic LinUCB needs A >= 1");
    require(spec_.phi.rows() == static_cast<Eigen::Index>(spec_.S) * spec_.A && spec_.phi.cols() == spec_.d,
            "feature matrix has the wrong shape");
    const std::size_t pairs = static_cast<std::size_t>(spec_.S) * spec_.A;
    n_.assign(pairs, 0.0);
    reward_.assign(pairs, 0.0);
    n_next_.assign(pairs * spec_.S, 0.0);
  }
}

double RobustLinUcb::width() const {
  const double t = static_cast<double>(episodes_ + 1);
  return 4.0 * zeta_ + theta_ * std::sqrt(spec_.d / (spec_.H * t));
}

Vec RobustLinUcb::ridge_estimate() const { return lambda_.ldlt().solve(target_); }

std::vector<double> RobustLinUcb::indices(std::span<const Vec> actions) const {
  const Eigen::LDLT<Mat> solver(lambda_);
  const Vec w = solver.solve(target_);
  const double beta = width();
  std::vector<double> out;
  out.reserve(actions.size());
  for (const Vec& a : actions) {
    require(a.size() == spec_.d, "action dimension differs from the learner's");
    const double norm = std::sqrt(std::max(0.0, a.dot(solver.solve(a))));
    out.push_back(std::min(w.dot(a) + beta * norm, 1.0));
  }
  return out;
}

LsviPlan RobustLinUcb::backward_pass() const {
  require(spec_.episodic(), "backward pass needs the episodic feature layout");
  const int S = spec_.S, A = spec_.A, H = spec_.H;
  const Eigen::LDLT<Mat> solver(lambda_);
  LsviPlan plan;
  plan.width = width();
  plan.w.resize(H);
  plan.q.assign(static_cast<std::size_t>(H) * S * A, 0.0);
  std::vector<double> norms(static_cast<std::size_t>(S) * A);
  for (std::size_t i = 0; i < norms.size(); ++i) {
    const Vec f = spec_.phi.row(static_cast<Eigen::Index>(i)).transpose();
    norms[i] = std::sqrt(std::max(0.0, f.dot(solver.solve(f))));
  }
  std::vector<double> next(S, 0.0);
  for (int h = H - 1; h >= 0; --h) {
    Vec y = Vec::Zero(spec_.d);
    for (std::size_t i = 0; i < n_.size(); ++i) {
      if (n_[i] == 0.0) continue;
      double regressand = reward_[i];
      for (int s2 = 0; s2 < S; ++s2) regressand += n_next_[i * S + s2] * next[s2];
      y += regressand * spec_.phi.row(static_cast<Eigen::Index>(i)).transpose();
    }
    plan.w[h] = solver.solve(y);
    std::vector<double> cur(S, 0.0);
    for (int s = 0; s < S; ++s) {
      double best = 0.0;
      for (int a = 0; a < A; ++a) {
        const std::size_t i = static_cast<std::size_t>(s) * A + a;
        const double raw = plan.w[h].dot(spec_.phi.row(static_cast<Eigen::Index>(i))) + plan.width * norms[i];
        const double q = std::clamp(raw, 0.0, 1.0);
        plan.q[(static_cast<std::size_t>(h) * S + s) * A + a] = q;
        best = a == 0 ? q : std::max(best, q);
      }
      cur[s] = best;
    }
    next = std::move(cur);
  }
  return plan;
}

Policy RobustLinUcb::select(const Context& ctx, Rng&) {
  if (!spec_.episodic()) {
    require(!ctx.actions.empty(), "LinUCB needs a nonempty action set");
    const auto idx = indices(ctx.actions);
    return Policy::arm(static_cast<int>(std::max_element(idx.begin(), idx.end()) - idx.begin()));
  }
  const LsviPlan plan = backward_pass();
  const int S = spec_.S, A = spec_.A, H = spec_.H;
  Policy pi;
  pi.actions.assign(static_cast<std::size_t>(H) * S, 0);
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s) {
      const double* q = &plan.q[(static_cast<std::size_t>(h) * S + s) * A];
      pi.actions[static_cast<std::size_t>(h) * S + s] = static_cast<int>(std::max_element(q, q + A) - q);
    }
  return pi;
}

void RobustLinUcb::update(const Feedback& fb) {
  ++episodes_;
  if (!spec_.episodic()) {
    require(fb.features.size() == spec_.d, "feedback features have the wrong dimension");
    lambda_.noalias() += fb.features * fb.features.transpose();
    target_ += fb.features * fb.reward;
    return;
  }
  for (const Step& st : fb.steps) {
    require(st.state >= 0 && st.state < spec_.S && st.action >= 0 && st.action < spec_.A &&
                st.next_state >= 0 && st.next_state < spec_.S,
            "trajectory step out of range");
    const std::size_t i = static_cast<std::size_t>(st.state) * spec_.A + st.action;
    const Vec f = spec_.phi.row(static_cast<Eigen::Index>(i)).transpose();
    lambda_.noalias() += f * f.transpose();
    n_[i] += 1.0;
    reward_[i] += st.reward;
    n_next_[i * spec_.S + st.next_state] += 1.0;
  }
}

RegretProfile linucb_profile(const LinUcbSpec& spec, double horizon, double delta, double kappa, double zeta0) {
  const double zeta = linucb_zeta(spec, horizon, delta, zeta0);
  RegretProfile p;
  p.beta1 = std::max(1.0, kappa * zeta * zeta * spec.d * spec.H);
  p.beta2 = std::max(1.0, kappa * spec.d);
  p.beta3 = std::max(1.0, kappa);
  p.ctype = CorruptionType::R;
  p.gap_form = false;
  return p;
}

LinUcbFactory::LinUcbFactory(LinUcbSpec spec, double horizon, double delta, double kappa, double zeta0)
    : spec_(std::move(spec)),
      horizon_(horizon),
      delta_(delta),
      zeta0_(zeta0),
      profile_(linucb_profile(spec_, horizon, delta, kappa, zeta0)) {
  require(horizon >= 1.0 && delta > 0.0 && delta < 1.0, "need T >= 1 and delta in (0, 1)");
}

std::unique_ptr<Learner> LinUcbFactory::make(double theta) const {
  return std::make_unique<RobustLinUcb>(spec_, horizon_, delta_, theta, zeta0_, profile_);
}

std::shared_ptr<const BaseFactory> LinUcbFactory::excluding(const Policy&) const {
  throw ContractError("LinUCB cannot run over a policy set with one policy removed");
}

}  // namespace cobe
