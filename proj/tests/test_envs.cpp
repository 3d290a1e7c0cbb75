#include <doctest.h>

#include <cmath>

#include "cobe/adversary.hpp"
#include "cobe/linear_envs.hpp"
#include "cobe/oracles.hpp"
#include "cobe/tabular_mdp.hpp"
#include "cobe/world.hpp"

using namespace cobe;

namespace {

TabularMdp deterministic_chain(int H) {
  // two states, one action, always move 0 -> 1 -> 1, reward 1/H everywhere
  TabularMdp m;
  m.S = 2;
  m.A = 1;
  m.H = H;
  m.kernel.p = {0.0, 1.0, 0.0, 1.0};
  m.kernel.sigma = {1.0 / H, 1.0 / H};
  return m;
}

Policy all_zero(const TabularMdp& m) { return Policy(std::vector<int>(static_cast<std::size_t>(m.H * m.S), 0)); }

Kernel perturb(const TabularMdp& m, Rng& rng) {
  Kernel k = m.kernel;
  for (int s = 0; s < m.S; ++s)
    for (int a = 0; a < m.A; ++a) {
      const std::size_t i = static_cast<std::size_t>(s) * m.A + a;
      k.sigma[i] = rng.uniform() / m.H;
      double total = 0.0;
      for (int y = 0; y < m.S; ++y) total += (k.p[i * m.S + y] = -std::log(1.0 - rng.uniform()));
      for (int y = 0; y < m.S; ++y) k.p[i * m.S + y] /= total;
    }
  return k;
}

}  // namespace

TEST_CASE("policy value, single step and deterministic chain") {
  TabularMdp one;
  one.S = 1;
  one.A = 2;
  one.H = 1;
  one.kernel.p = {1.0, 1.0};
  one.kernel.sigma = {0.3, 0.6};
  CHECK(policy_value(one, Policy::arm(0)) == doctest::Approx(0.3));

  const TabularMdp chain = deterministic_chain(2);
  CHECK(policy_value(chain, all_zero(chain)) == doctest::Approx(1.0));
}

TEST_CASE("policy value rejects invalid policies") {
  Rng rng(1);
  const TabularMdp m = random_tabular_mdp(2, 2, 2, rng);
  CHECK_THROWS_AS(policy_value(m, Policy({0, 1, 2, 0})), ContractError);
  CHECK_THROWS_AS(policy_value(m, Policy({0, 1})), ContractError);
}

TEST_CASE("policy value matches Monte-Carlo rollouts") {
  Rng rng(2);
  const TabularMdp m = random_tabular_mdp(3, 2, 3, rng);
  const Policy pi({1, 0, 1, 0, 0, 1, 1, 1, 0});
  const double v = policy_value(m, pi);
  const int n = 1000000;
  double sum = 0.0, sum_sq = 0.0;
  Rng sim(3);
  for (int i = 0; i < n; ++i) {
    const double r = simulate_episode(m, m.kernel, pi, m.s1, sim).reward;
    sum += r;
    sum_sq += r * r;
  }
  const double mean = sum / n, se = std::sqrt((sum_sq / n - mean * mean) / n);
  CHECK(std::abs(mean - v) <= 3 * se);
}

TEST_CASE("corrupted replays match the corrupted policy value") {
  Rng rng(4);
  const TabularMdp m = random_tabular_mdp(3, 2, 2, rng);
  TransitionSwapAdversary adv(1e9);
  const Kernel k = adv.corrupt(1, {}, m);
  const Policy pi({0, 1, 0, 1, 1, 0});
  const double v = policy_value(m, pi, k, m.s1);
  CHECK(v != doctest::Approx(policy_value(m, pi)));
  const int n = 100000;
  double sum = 0.0, sum_sq = 0.0;
  Rng sim(5);
  for (int i = 0; i < n; ++i) {
    const double r = simulate_episode(m, k, pi, m.s1, sim).reward;
    sum += r;
    sum_sq += r * r;
  }
  const double mean = sum / n, se = std::sqrt((sum_sq / n - mean * mean) / n);
  CHECK(std::abs(mean - v) <= 3 * se);
}

TEST_CASE("deterministic noiseless episode equals the policy value") {
  const TabularMdp chain = deterministic_chain(3);
  Rng rng(0);
  // sigma = 1/H means Bernoulli(1): the draw is always 1.
  CHECK(simulate_episode(chain, chain.kernel, all_zero(chain), 0, rng).reward == doctest::Approx(1.0));
}

TEST_CASE("MDP corruption magnitude examples") {
  TabularMdp m;
  m.S = 2;
  m.A = 1;
  m.H = 2;
  m.kernel.p = {0.5, 0.5, 0.5, 0.5};
  m.kernel.sigma = {0.2, 0.2};
  CHECK(corruption_magnitude_mdp(m, m.kernel, m.kernel) == 0.0);
  Kernel k = m.kernel;
  k.sigma[0] += 0.1;
  CHECK(corruption_magnitude_mdp(m, m.kernel, k) == doctest::Approx(0.2));
  CHECK(vertex_sup(m, m.kernel, k) == doctest::Approx(0.2));

  m.H = 3;
  m.kernel.sigma = {0.1, 0.1};
  Kernel q = m.kernel;
  q.p[0] = 0.3;
  q.p[1] = 0.7;
  CHECK(corruption_magnitude_mdp(m, m.kernel, q) == doctest::Approx(0.6));
  CHECK(vertex_sup(m, m.kernel, q) == doctest::Approx(0.6));
}

TEST_CASE("closed-form corruption magnitude equals the vertex oracle") {
  Rng rng(6);
  for (int trial = 0; trial < 500; ++trial) {
    const int S = 1 + trial % 6, A = 1 + trial % 3, H = 1 + trial % 4;
    const TabularMdp m = random_tabular_mdp(S, A, H, rng);
    const Kernel k = perturb(m, rng);
    CHECK(std::abs(corruption_magnitude_mdp(m, m.kernel, k) - vertex_sup(m, m.kernel, k)) <= 1e-12);
  }
}

TEST_CASE("bandit corruption magnitude") {
  const double clean[] = {0.7, 0.2};
  CHECK(corruption_magnitude_bandit(clean, clean) == 0.0);
  const double corrupted[] = {0.7, 0.5};
  CHECK(corruption_magnitude_bandit(clean, corrupted) == doctest::Approx(0.3));
  Rng rng(7);
  std::vector<double> a(5), b(5);
  double scan = 0.0;
  for (int i = 0; i < 5; ++i) {
    a[i] = rng.uniform();
    b[i] = rng.uniform();
    scan = std::max(scan, std::abs(a[i] - b[i]));
  }
  CHECK(corruption_magnitude_bandit(a, b) == scan);
}

TEST_CASE("one-hot linear MDP") {
  Rng rng(8);
  const TabularMdp m = random_tabular_mdp(2, 2, 3, rng);
  const LinearMdp lin = onehot_linear_mdp(m);
  CHECK(lin.dim() == 4);
  for (int s = 0; s < 2; ++s)
    for (int a = 0; a < 2; ++a) {
      const Vec f = lin.feature(s, a);
      CHECK(f.sum() == 1.0);
      CHECK((f.array() != 0.0).count() == 1);
      for (int y = 0; y < 2; ++y) CHECK(f.dot(lin.nu.row(y).transpose()) == doctest::Approx(m.p(s, a, y)));
    }
  CHECK_NOTHROW(lin.validate());
  const Policy pi({1, 0, 0, 1, 1, 1});
  CHECK(policy_value(lin, pi, m.s1) == doctest::Approx(policy_value(m, pi)).epsilon(1e-12));
  const TabularMdp back = lin.to_tabular();
  CHECK(policy_value(back, pi) == doctest::Approx(policy_value(m, pi)).epsilon(1e-12));
}

TEST_CASE("gap bandit layout") {
  const LinearBandit b = gap_bandit(3, 0.3);
  const auto mu = b.means();
  CHECK(mu[0] == doctest::Approx(0.8));
  CHECK(mu[1] == doctest::Approx(0.5));
  CHECK(mu[2] == doctest::Approx(0.2));
  CHECK(b.best_arm() == 0);
  CHECK_THROWS_AS(gap_bandit(3, 0.6), ContractError);
}

TEST_CASE("budgets are front-loaded and spent exactly") {
  Budget b(2.5);
  CHECK(b.fraction(1.0) == 1.0);
  CHECK(b.fraction(1.0) == 1.0);
  CHECK(b.fraction(1.0) == 0.5);
  CHECK(b.fraction(1.0) == 0.0);
}

TEST_CASE("flip adversary reverses the ranking until the budget runs out") {
  BanditWorld w(gap_bandit(2, 0.4), std::make_unique<FlipAdversary>(1.0));
  Rng rng(9);
  CorruptionLedger ledger(1.0);
  for (int t = 1; t <= 10; ++t) {
    w.begin_round(t, rng);
    const RoundOutcome o = w.play(Policy::arm(0), rng);
    ledger.accumulate(o.c);
    CHECK(o.mu_star == doctest::Approx(0.7));
    CHECK(o.mu_chosen == doctest::Approx(0.7));
  }
  CHECK(ledger.agg_a() == doctest::Approx(1.0));
  CHECK(ledger.per_round()[0] == doctest::Approx(0.4));
  CHECK(ledger.per_round()[3] == 0.0);
}

TEST_CASE("bandit arm with zero corrupted mean pays zero") {
  LinearBandit b;
  b.w_star = Vec::Zero(2);
  b.w_star(0) = 1.0;
  Vec a0(2), a1(2);
  a0 << 1, 0;
  a1 << 0, 1;
  b.arms = {a0, a1};
  BanditWorld w(b, std::make_unique<NoBanditCorruption>());
  Rng rng(10);
  for (int t = 1; t <= 50; ++t) {
    w.begin_round(t, rng);
    CHECK(w.play(Policy::arm(1), rng).feedback.reward == 0.0);
  }
}

TEST_CASE("adversary factories") {
  CHECK(make_bandit_adversary("none", 0, -1) != nullptr);
  CHECK(make_bandit_adversary("lower_bound", 5, -1) != nullptr);
  CHECK_THROWS_AS(make_bandit_adversary("nope", 0, -1), ConfigError);
  CHECK_THROWS_AS(make_mdp_adversary("flip", 0), ConfigError);
}

TEST_CASE("MDP world reports c_t and uncorrupted means") {
  Rng rng(12);
  const TabularMdp m = random_tabular_mdp(3, 2, 2, rng);
  MdpWorld w(m, std::make_unique<TransitionSwapAdversary>(1e9));
  const Policy pi({0, 0, 0, 1, 1, 1});
  w.begin_round(1, rng);
  const RoundOutcome o = w.play(pi, rng);
  CHECK(o.mu_chosen == doctest::Approx(policy_value(m, pi)));
  CHECK(o.mu_star == doctest::Approx(solve_optimal(m, m.kernel).v1[m.s1]));
  TransitionSwapAdversary ref(1e9);
  CHECK(o.c == doctest::Approx(corruption_magnitude_mdp(m, m.kernel, ref.corrupt(1, {}, m))));
  CHECK(o.feedback.steps.size() == 2);
  for (const Step& s : o.feedback.steps) CHECK((s.reward == 0.0 || s.reward == doctest::Approx(0.5)));
}

TEST_CASE("lower-bound action sets") {
  const auto gen = lower_bound_action_sets(3, 0.1);
  Rng rng(0);
  const auto early = gen(3, rng), late = gen(4, rng);
  CHECK(early[0](1) == doctest::Approx(0.5));
  CHECK(late[0](1) == doctest::Approx(0.05));
  CHECK(late[1](1) == doctest::Approx(-0.05));
}
