#include <doctest.h>

#include <cmath>

#include "cobe/design.hpp"
#include "cobe/linucb.hpp"
#include "cobe/oracles.hpp"
#include "cobe/phased_elimination.hpp"
#include "cobe/ucbvi.hpp"
#include "cobe/world.hpp"

using namespace cobe;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Feedback episode_feedback(const TabularMdp& m, const Policy& pi, Rng& rng) {
  const Episode e = simulate_episode(m, m.kernel, pi, m.s1, rng);
  Feedback fb;
  fb.policy = pi;
  fb.reward = e.reward;
  fb.steps = e.steps;
  return fb;
}

std::vector<Vec> random_actions(int n, int d, Rng& rng) {
  std::vector<Vec> out;
  for (int i = 0; i < n; ++i) {
    Vec a(d);
    for (int j = 0; j < d; ++j) a(j) = 2.0 * rng.uniform() - 1.0;
    out.push_back(a);
  }
  return out;
}

}  // namespace

TEST_CASE("ucbvi bonus") {
  const MdpShape one{1, 1, 1, 0};
  CHECK(ucbvi_bonus(1, 0, one, 100, 0.1) == 1.0);
  CHECK(ucbvi_bonus(0, 0, one, 100, 0.1) == 1.0);
  const MdpShape shape{3, 2, 3, 0};
  const double T = 1000, delta = 0.05;
  const double L = std::log(64.0 * 3 * 2 * 3 * T * T / delta);
  const double n = 8.0 * L / 1e-4;  // 2 sqrt(2L/n) = 0.01
  CHECK(ucbvi_bonus(n, 0, shape, T, delta) == doctest::Approx(0.01));
  const double v = 2.0 * std::sqrt(2.0 * L / 100.0);
  if (v + 0.1 < 1.0) CHECK(ucbvi_bonus(100, 10, shape, T, delta) == doctest::Approx(v + 0.1));
  CHECK(ucbvi_bonus(1e6, 5, shape, T, delta) >= ucbvi_bonus(1e6, 1, shape, T, delta));
}

TEST_CASE("ucbvi with no data plans action 0 everywhere") {
  const MdpShape shape{3, 2, 2, 0};
  RobustUcbvi alg(shape, 100, 0.05, 0, ucbvi_profile(shape, 100, 0.05, 1));
  Rng rng(0);
  const Policy pi = alg.select(Context{}, rng);
  for (int a : pi.actions) CHECK(a == 0);
  for (double q : alg.q_table()) CHECK(q == 1.0);
}

TEST_CASE("ucbvi with maximal theta behaves like the zero-data planner") {
  Rng env(1);
  const TabularMdp m = random_tabular_mdp(3, 2, 2, env);
  const MdpShape shape{3, 2, 2, 0};
  const double T = 200;
  RobustUcbvi alg(shape, T, 0.05, m.c_max() * T, ucbvi_profile(shape, T, 0.05, 1));
  Rng rng(2);
  for (int i = 0; i < 50; ++i) alg.update(episode_feedback(m, Policy({0, 1, 0, 1, 0, 1}), rng));
  const Policy pi = alg.select(Context{}, rng);
  for (int a : pi.actions) CHECK(a == 0);
  for (double q : alg.q_table()) CHECK(q == 1.0);
}

TEST_CASE("ucbvi on a fully explored deterministic MDP finds the optimum") {
  // deterministic transitions, rewards sigma in {0, 1/H}: noiseless data
  TabularMdp m;
  m.S = 2;
  m.A = 2;
  m.H = 2;
  m.kernel.p = {1, 0, 0, 1, 1, 0, 0, 1};
  m.kernel.sigma = {0.0, 0.0, 0.5, 0.0};
  const MdpShape shape{2, 2, 2, 0};
  const double T = 1e3;
  RobustUcbvi alg(shape, T, 0.05, 0, ucbvi_profile(shape, T, 0.05, 1));
  Rng rng(3);
  const std::vector<Policy> cover = {Policy({0, 0, 0, 0}), Policy({1, 1, 1, 1}), Policy({1, 0, 1, 0}),
                                     Policy({0, 1, 0, 1})};
  for (int i = 0; i < 1000000; ++i) alg.update(episode_feedback(m, cover[i % 4], rng));
  const Policy pi = alg.select(Context{}, rng);
  const OptimalSolution opt = solve_optimal(m, m.kernel);
  CHECK(policy_value(m, pi) == doctest::Approx(opt.v1[m.s1]));
  for (double q : alg.q_table()) CHECK((q >= 0.0 && q <= 1.0));
}

TEST_CASE("ucbvi with an excluded policy never returns it") {
  Rng env(4);
  const TabularMdp m = random_tabular_mdp(2, 2, 2, env);
  const MdpShape shape{2, 2, 2, 0};
  const Policy pihat({0, 0, 0, 0});
  RobustUcbvi alg(shape, 100, 0.05, 0, ucbvi_profile(shape, 100, 0.05, 1), pihat);
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const Policy pi = alg.select(Context{}, rng);
    CHECK(pi != pihat);
    alg.update(episode_feedback(m, pi, rng));
  }
}

TEST_CASE("ucbvi optimism on uncorrupted data") {
  Rng env(6);
  const TabularMdp m = random_tabular_mdp(3, 2, 3, env);
  const double vstar = solve_optimal(m, m.kernel).v1[m.s1];
  const MdpShape shape{3, 2, 3, 0};
  const double T = 2000;
  int optimistic = 0, checks = 0;
  for (int seed = 0; seed < 10; ++seed) {
    RobustUcbvi alg(shape, T, 0.05, 0, ucbvi_profile(shape, T, 0.05, 1));
    Rng rng(100 + seed);
    for (int t = 1; t <= 2000; ++t) {
      const Policy pi = alg.select(Context{}, rng);
      if (t % 200 == 0) {
        ++checks;
        optimistic += alg.planned_value() >= vstar;
      }
      alg.update(episode_feedback(m, pi, rng));
    }
  }
  CHECK(checks == 100);
  CHECK(optimistic >= 95);
}

TEST_CASE("profiles") {
  const RegretProfile pe = pe_profile(2, 1e4, 0.05, 1);
  CHECK(pe.beta2 == doctest::Approx(std::pow(2.0, 1.5) * std::log(1e4)));
  CHECK(pe.beta2 == doctest::Approx(26.05).epsilon(1e-3));
  CHECK(pe.ctype == CorruptionType::A);
  CHECK(pe.gap_form);

  const MdpShape shape{3, 2, 3, 0};
  const RegretProfile u1 = ucbvi_profile(shape, 1e4, 0.05, 1), u2 = ucbvi_profile(shape, 1e4, 0.05, 2);
  CHECK(u1.ctype == CorruptionType::A);
  CHECK(u2.beta1 == doctest::Approx(2 * u1.beta1));
  CHECK(u2.beta2 == doctest::Approx(2 * u1.beta2));
  CHECK(u2.beta3 == doctest::Approx(2 * u1.beta3));

  LinUcbSpec spec;
  spec.d = 3;
  const RegretProfile l1 = linucb_profile(spec, 1e4, 0.05, 1, 1), l2 = linucb_profile(spec, 1e4, 0.05, 2, 1);
  CHECK(l1.ctype == CorruptionType::R);
  CHECK_FALSE(l1.gap_form);
  CHECK(l2.beta1 == doctest::Approx(2 * l1.beta1));
  CHECK(l2.beta2 == doctest::Approx(2 * l1.beta2));
  CHECK(l2.beta3 == doctest::Approx(2 * l1.beta3));
}

TEST_CASE("design on an orthonormal basis and a single action") {
  for (int d = 1; d <= 5; ++d) {
    std::vector<Vec> e;
    for (int i = 0; i < d; ++i) e.push_back(Vec::Unit(d, i));
    const Design des = compute_design(e, pe_m0(d));
    CHECK(des.objective <= 2.0 * d + 1e-9);
    std::vector<double> uniform(d, 1.0 / d);
    CHECK(design_objective(e, uniform) == doctest::Approx(d));
  }
  const std::vector<Vec> one = {v2(0.3, 0.4)};
  const Design des = compute_design(one, 10);
  CHECK(des.weights[0] == doctest::Approx(1.0));
  CHECK(des.objective == doctest::Approx(1.0));
  CHECK_THROWS_AS(compute_design(std::vector<Vec>{}, 10), ContractError);
}

TEST_CASE("design certificates on random sets and closeness to the grid oracle") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 3;
    const auto acts = random_actions(20, d, rng);
    const Design des = compute_design(acts, pe_m0(d));
    CHECK(des.objective <= 2.0 * d + 1e-9);
    CHECK(des.support <= pe_m0(d));
    double total = 0.0;
    for (double w : des.weights) total += w;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (int trial = 0; trial < 20; ++trial) {
    const auto acts = random_actions(3, 2, rng);
    const Design des = compute_design(acts, pe_m0(2));
    const GridDesign grid = simplex_design_search(acts, 0.01);
    CHECK(des.objective <= 1.1 * grid.objective);
  }
}

TEST_CASE("design on a degenerate span") {
  // three collinear actions in R^3 span one direction
  const std::vector<Vec> acts = {Vec::Unit(3, 0), 2.0 * Vec::Unit(3, 0), -0.5 * Vec::Unit(3, 0)};
  const Design des = compute_design(acts, pe_m0(3));
  CHECK(des.objective <= 2.0 + 1e-9);
}

TEST_CASE("pull schedule") {
  const double zeta[] = {0.5, 0.5};
  auto u = pe_schedule(zeta, 10, 72);
  CHECK(u[0] == 5);
  CHECK(u[1] == 5);
  const double with_zero[] = {1.0, 0.0};
  CHECK(pe_schedule(with_zero, 10, 72)[1] == 0);
  const double tiny[] = {0.999, 0.001};
  CHECK(pe_schedule(tiny, 720, 72)[1] == 10);
  CHECK(pe_m0(1) == 72);
  CHECK(pe_m0(2) == 144);
}

TEST_CASE("elimination rule") {
  const std::vector<Vec> same = {v2(1, 0), v2(1, 0), v2(1, 0)};
  CHECK(pe_eliminate(same, v2(0.5, 0.5), 0.0).size() == 3);
  const std::vector<Vec> two = {v2(1, 0), v2(0, 1)};
  const auto keep = pe_eliminate(two, v2(0.75, 0.25), 0.3);
  REQUIRE(keep.size() == 1);
  CHECK(keep[0] == 0);
}

TEST_CASE("noiseless phases eliminate exactly like a scalar re-computation") {
  // rewards equal to the means, so every phase estimate is exact
  const std::vector<Vec> arms = {v2(1, 0), v2(0, 1), v2(0.7, 0.7)};
  const Vec w = v2(0.9, 0.2);
  const double T = 1e5, delta = 0.05;
  RobustPhasedElimination pe(arms, {0, 1, 2}, T, delta, 0, pe_profile(2, T, delta, 1));
  Rng rng(0);
  while (pe.phase() <= 12) {
    const Policy pi = pe.select(Context{}, rng);
    Feedback fb;
    fb.policy = pi;
    fb.reward = w.dot(arms[pi.actions[0]]);
    pe.update(fb);
  }
  const auto& hist = pe.active_history();
  REQUIRE(hist.size() == 14);  // phases 0..13
  const double mu[3] = {0.9, 0.2, 0.77};
  bool eliminated_something = false;
  for (std::size_t k = 1; k < hist.size(); ++k) {
    const double mk = 144.0 * std::pow(2.0, static_cast<double>(k) - 2.0);  // m_{k-1}
    const double thr = 8.0 * std::sqrt(std::log(T / delta) / mk);
    double best = -1.0;
    for (int i : hist[k - 1]) best = std::max(best, mu[i]);
    std::vector<int> expect;
    for (int i : hist[k - 1])
      if (best - mu[i] <= thr) expect.push_back(i);
    CHECK(hist[k] == expect);
    eliminated_something = eliminated_something || expect.size() < hist[k - 1].size();
  }
  CHECK(eliminated_something);
  CHECK(hist.back() == std::vector<int>{0});
}

TEST_CASE("phased elimination keeps the best arm under bounded corruption with theta = C") {
  const LinearBandit b = gap_bandit(3, 0.3);
  int kept = 0;
  for (int seed = 0; seed < 10; ++seed) {
    BanditWorld w(b, std::make_unique<FlipAdversary>(20.0));
    RobustPhasedElimination pe(b.arms, {0, 1, 2}, 5000, 0.05, 20.0, pe_profile(2, 5000, 0.05, 1));
    Rng rng(seed);
    for (int t = 1; t <= 5000; ++t) {
      const Context ctx = w.begin_round(t, rng);
      const Policy pi = pe.select(ctx, rng);
      pe.update(w.play(pi, rng).feedback);
    }
    bool ok = true;
    for (const auto& set : pe.active_history()) ok = ok && std::find(set.begin(), set.end(), 0) != set.end();
    kept += ok;
  }
  CHECK(kept >= 9);
}

TEST_CASE("linucb: empty data, ridge estimate and theta widening") {
  LinUcbSpec spec;
  spec.d = 2;
  RobustLinUcb zero(spec, 1000, 0.05, 0, 1, linucb_profile(spec, 1000, 0.05, 1, 1));
  const std::vector<Vec> acts = {v2(0.1, 0), v2(0, 0.05)};
  const auto idx = zero.indices(acts);
  CHECK(idx[0] == doctest::Approx(std::min(zero.width() * 0.1, 1.0)));

  RobustLinUcb a(spec, 1000, 0.05, 0, 1, linucb_profile(spec, 1000, 0.05, 1, 1));
  RobustLinUcb b(spec, 1000, 0.05, 50, 1, linucb_profile(spec, 1000, 0.05, 1, 1));
  const int n = 40;
  for (int i = 0; i < n; ++i) {
    Feedback fb;
    fb.policy = Policy::arm(0);
    fb.features = v2(1, 0);
    fb.reward = 1.0;
    a.update(fb);
    b.update(fb);
  }
  CHECK(a.ridge_estimate()(0) == doctest::Approx(n / (n + 1.0)));
  CHECK(b.width() > a.width());
  const std::vector<Vec> small = {v2(0.001, 0), v2(0, 0.001)};
  const auto ia = a.indices(small), ib = b.indices(small);
  for (int i = 0; i < 2; ++i)
    if (ib[i] < 1.0) CHECK(ib[i] > ia[i]);
  Eigen::SelfAdjointEigenSolver<Mat> es(a.gram());
  CHECK(es.eigenvalues().minCoeff() >= 1.0 - 1e-12);
}

TEST_CASE("lsvi backward pass with no data") {
  Rng env(8);
  const TabularMdp m = random_tabular_mdp(2, 2, 2, env);
  const LinearMdp lin = onehot_linear_mdp(m);
  LinUcbSpec spec{lin.dim(), lin.H, lin.S, lin.A, lin.phi};
  RobustLinUcb alg(spec, 100, 0.05, 0, 0.01, linucb_profile(spec, 100, 0.05, 1, 0.01));
  const LsviPlan plan = alg.backward_pass();
  for (const Vec& w : plan.w) CHECK(w.norm() == 0.0);
  for (double q : plan.q) CHECK(q == doctest::Approx(std::min(plan.width * 1.0, 1.0)));
}

TEST_CASE("lsvi Q stays in [0, 1] and widens with theta") {
  Rng env(9);
  const TabularMdp m = random_tabular_mdp(2, 2, 2, env);
  const LinearMdp lin = onehot_linear_mdp(m);
  LinUcbSpec spec{lin.dim(), lin.H, lin.S, lin.A, lin.phi};
  RobustLinUcb a(spec, 1000, 0.05, 0, 0.01, linucb_profile(spec, 1000, 0.05, 1, 0.01));
  RobustLinUcb b(spec, 1000, 0.05, 5, 0.01, linucb_profile(spec, 1000, 0.05, 1, 0.01));
  Rng rng(10);
  for (int i = 0; i < 300; ++i) {
    const Feedback fb = episode_feedback(m, Policy({i % 2, (i / 2) % 2, (i / 3) % 2, 1}), rng);
    a.update(fb);
    b.update(fb);
  }
  const LsviPlan pa = a.backward_pass(), pb = b.backward_pass();
  for (std::size_t i = 0; i < pa.q.size(); ++i) {
    CHECK((pa.q[i] >= 0.0 && pa.q[i] <= 1.0));
    CHECK(pb.q[i] >= pa.q[i]);
  }
  CHECK(pb.width > pa.width);
}
