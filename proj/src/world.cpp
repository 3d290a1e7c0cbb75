#include "cobe/world.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cobe {

namespace {

constexpr double kMeanSlack = 1e-12;

void check_means(std::span<const double> mu) {
  for (double m : mu) {
    if (!(m >= -kMeanSlack && m <= 1.0 + kMeanSlack)) {
      std::ostringstream os;
      os << "adversary contract violation: corrupted mean " << m << " outside [0, 1]";
      throw ContractError(os.str());
    }
  }
}

int arm_of(const Policy& pi, std::size_t count) {
  require(pi.actions.size() == 1, "bandit policy must name exactly one action");
  const int a = pi.actions[0];
  require(a >= 0 && static_cast<std::size_t>(a) < count, "bandit action out of range");
  return a;
}

}  // namespace

BanditWorld::BanditWorld(LinearBandit env, std::unique_ptr<BanditAdversary> adversary)
    : env_(std::move(env)), adversary_(std::move(adversary)) {
  env_.validate();
  clean_ = env_.means();
  best_ = env_.best_arm();
  ctx_.actions = env_.arms;
}

Context BanditWorld::begin_round(int t, Rng&) {
  t_ = t;
  corrupted_ = adversary_->corrupt(t, history_, clean_);
  require(corrupted_.size() == clean_.size(), "adversary returned the wrong number of means");
  check_means(corrupted_);
  return ctx_;
}

RoundOutcome BanditWorld::play(const Policy& pi, Rng& rng) {
  const int a = arm_of(pi, clean_.size());
  RoundOutcome out;
  out.c = corruption_magnitude_bandit(clean_, corrupted_);
  out.mu_chosen = clean_[a];
  out.mu_star = clean_[best_];
  out.feedback.policy = pi;
  out.feedback.reward = rng.bernoulli(corrupted_[a]) ? 1.0 : 0.0;
  out.feedback.features = env_.arms[a];
  history_.push_back({Context{}, pi, out.feedback.reward});
  return out;
}

ContextualWorld::ContextualWorld(ContextualBandit env, std::unique_ptr<BanditAdversary> adversary)
    : env_(std::move(env)), adversary_(std::move(adversary)) {
  require(static_cast<bool>(env_.generator), "contextual bandit needs an action-set generator");
}

Context ContextualWorld::begin_round(int t, Rng& rng) {
  t_ = t;
  ctx_ = Context{};
  ctx_.actions = env_.generator(t, rng);
  require(!ctx_.actions.empty(), "empty action set");
  clean_ = env_.means(ctx_.actions);
  check_means(clean_);
  corrupted_ = adversary_->corrupt(t, history_, clean_);
  require(corrupted_.size() == clean_.size(), "adversary returned the wrong number of means");
  check_means(corrupted_);
  return ctx_;
}

RoundOutcome ContextualWorld::play(const Policy& pi, Rng& rng) {
  const int a = arm_of(pi, clean_.size());
  RoundOutcome out;
  out.c = corruption_magnitude_bandit(clean_, corrupted_);
  out.mu_chosen = clean_[a];
  out.mu_star = *std::max_element(clean_.begin(), clean_.end());
  out.feedback.policy = pi;
  out.feedback.reward = rng.bernoulli(corrupted_[a]) ? 1.0 : 0.0;
  out.feedback.features = ctx_.actions[a];
  history_.push_back({ctx_, pi, out.feedback.reward});
  return out;
}

Policy ContextualWorld::best_policy() const {
  throw ContractError("contextual bandits have no context-free optimal policy");
}

MdpWorld::MdpWorld(TabularMdp env, std::unique_ptr<MdpAdversary> adversary)
    : env_(std::move(env)), adversary_(std::move(adversary)) {
  env_.validate();
  optimal_ = solve_optimal(env_, env_.kernel);
  ctx_.initial_state = env_.s1;
}

Context MdpWorld::begin_round(int t, Rng&) {
  t_ = t;
  corrupted_ = adversary_->corrupt(t, history_, env_);
  env_.validate_kernel(corrupted_);
  return ctx_;
}

RoundOutcome MdpWorld::play(const Policy& pi, Rng& rng) {
  RoundOutcome out;
  out.c = corruption_magnitude_mdp(env_, env_.kernel, corrupted_);
  out.mu_chosen = policy_value(env_, pi, env_.kernel, env_.s1);
  out.mu_star = optimal_.v1[env_.s1];
  Episode ep = simulate_episode(env_, corrupted_, pi, env_.s1, rng);
  const double cap = env_.reward_cap();
  for (const Step& st : ep.steps)
    require(st.reward >= 0.0 && st.reward <= cap + kMeanSlack, "step reward outside [0, 1/H]");
  out.feedback.policy = pi;
  out.feedback.reward = ep.reward;
  out.feedback.steps = std::move(ep.steps);
  history_.push_back({ctx_, pi, out.feedback.reward});
  return out;
}

}  // namespace cobe
