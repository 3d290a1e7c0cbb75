#include "cobe/leave_one_out.hpp"

#include <algorithm>

#include "cobe/cobe.hpp"

namespace cobe {

Kernel LeaveOneOut::lift(const Kernel& k) const {
  const int Sp = mdp.S, Ap = mdp.A;
  Kernel out;
  out.p.assign(static_cast<std::size_t>(Sp) * Ap * Sp, 0.0);
  out.sigma.assign(static_cast<std::size_t>(Sp) * Ap, 0.0);
  auto row = [&](int s, int a) { return (static_cast<std::size_t>(s) * Ap + a) * Sp; };
  // s0: action c enters copy c at M's start state; spare actions stay put.
  for (int a = 0; a < Ap; ++a) {
    const int dest = a < copies ? copy_state(a, start_state) : 0;
    out.p[row(0, a) + dest] = 1.0;
  }
  for (int c = 0; c < copies; ++c)
    for (int s = 0; s < S; ++s) {
      const int x = copy_state(c, s);
      for (int a = 0; a < Ap; ++a) {
        if (a >= A) {
          out.p[row(x, a) + 0] = 1.0;
          continue;
        }
        const std::size_t i = static_cast<std::size_t>(s) * A + a;
        out.sigma[static_cast<std::size_t>(x) * Ap + a] = k.sigma[i];
        for (int y = 0; y < S; ++y) out.p[row(x, a) + copy_state(c, y)] = k.p[i * S + y];
      }
    }
  return out;
}

Policy LeaveOneOut::to_original(const Policy& prime) const {
  require(prime.actions.size() == static_cast<std::size_t>(mdp.H) * mdp.S, "M' policy has the wrong size");
  const int c = prime.actions[0];  // layer 0, state s0
  require(c >= 0 && c < copies, "M' policy does not enter a copy");
  Policy pi;
  pi.actions.resize(static_cast<std::size_t>(H) * S);
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s)
      pi.actions[static_cast<std::size_t>(h) * S + s] =
          prime.actions[static_cast<std::size_t>(h + 1) * mdp.S + copy_state(c, s)];
  return pi;
}

Policy LeaveOneOut::to_prime(const Policy& pi) const {
  require(pi.actions.size() == pihat.actions.size(), "policy has the wrong size");
  int c = -1;
  for (std::size_t i = 0; i < pi.actions.size(); ++i)
    if (pi.actions[i] != pihat.actions[i]) {
      c = static_cast<int>(i);  // i = h * S + s is the copy index
      break;
    }
  require(c >= 0, "the excluded policy has no counterpart in M'");
  Policy prime;
  prime.actions.assign(static_cast<std::size_t>(mdp.H) * mdp.S, 0);
  for (int h = 0; h < mdp.H; ++h)
    for (int x = 0; x < mdp.S; ++x) {
      int a = 0;
      while (a < mdp.A && !mdp.is_allowed(h, x, a)) ++a;
      prime.actions[static_cast<std::size_t>(h) * mdp.S + x] = a;
    }
  prime.actions[0] = c;
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s)
      prime.actions[static_cast<std::size_t>(h + 1) * mdp.S + copy_state(c, s)] =
          pi.actions[static_cast<std::size_t>(h) * S + s];
  return prime;
}

LeaveOneOut leave_one_out(const TabularMdp& m, const Policy& pihat) {
  m.validate();
  check_policy(m, pihat);
  require(m.A >= 2, "leaving out the only policy leaves an empty action set");
  LeaveOneOut out;
  out.pihat = pihat;
  out.S = m.S;
  out.A = m.A;
  out.H = m.H;
  out.start_state = m.s1;
  out.copies = m.H * m.S;
  TabularMdp& mp = out.mdp;
  mp.S = 1 + out.copies * m.S;
  mp.A = std::max(m.A, out.copies);
  mp.H = m.H + 1;
  mp.s1 = 0;
  mp.reward_horizon = m.scale();
  mp.kernel = out.lift(m.kernel);
  mp.allowed.assign(static_cast<std::size_t>(mp.H) * mp.S * mp.A, 0);
  auto allow = [&](int h, int x, int a) { mp.allowed[(static_cast<std::size_t>(h) * mp.S + x) * mp.A + a] = 1; };
  for (int c = 0; c < out.copies; ++c) allow(0, 0, c);
  for (int h = 1; h < mp.H; ++h) allow(h, 0, 0);  // s0 is unreachable after the first step
  for (int c = 0; c < out.copies; ++c)
    for (int s = 0; s < m.S; ++s) {
      const int x = out.copy_state(c, s);
      for (int a = 0; a < m.A; ++a) allow(0, x, a);  // unreachable at layer 0
      for (int h = 0; h < m.H; ++h)
        for (int a = 0; a < m.A; ++a) {
          const bool banned = c == h * m.S + s && a == pihat.actions[static_cast<std::size_t>(h) * m.S + s];
          if (!banned) allow(h + 1, x, a);
        }
    }
  mp.validate();
  return out;
}

namespace {

class ExcludingLearner final : public Learner {
 public:
  ExcludingLearner(std::unique_ptr<Learner> inner, Policy pihat, RegretProfile profile)
      : inner_(std::move(inner)), pihat_(std::move(pihat)), profile_(profile) {}

  Policy select(const Context& ctx, Rng& rng) override {
    Policy pi = inner_->select(ctx, rng);
    require(pi != pihat_, "excluding learner selected the excluded policy");
    return pi;
  }
  void update(const Feedback& fb) override { inner_->update(fb); }
  RegretProfile profile() const override { return profile_; }
  RoundTag tag() const override { return inner_->tag(); }

 private:
  std::unique_ptr<Learner> inner_;
  Policy pihat_;
  RegretProfile profile_;
};

}  // namespace

std::unique_ptr<Learner> make_excluding_learner(const std::shared_ptr<const BaseFactory>& base,
                                                const Policy& pihat, double c_max) {
  auto restricted = base->excluding(pihat);
  return std::make_unique<ExcludingLearner>(std::make_unique<Cobe>(restricted, c_max), pihat,
                                            base->profile().gap_free());
}

LearnerMaker excluding_learner_maker(std::shared_ptr<const BaseFactory> base, Policy pihat, double c_max) {
  auto restricted = base->excluding(pihat);
  const RegretProfile profile = base->profile().gap_free();
  return [restricted, pihat = std::move(pihat), c_max, profile]() -> std::unique_ptr<Learner> {
    return std::make_unique<ExcludingLearner>(std::make_unique<Cobe>(restricted, c_max), pihat, profile);
  };
}

}  // namespace cobe
