#include <doctest.h>

#include <cmath>

#include "cobe/design.hpp"
#include "cobe/oracles.hpp"
#include "cobe/tabular_mdp.hpp"

using namespace cobe;

TEST_CASE("enumeration of a two-arm bandit") {
  const double mu[] = {0.3, 0.7};
  const PolicyTable t = enumerate_policies(mu);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].policy == Policy::arm(1));
  CHECK(t.gap == doctest::Approx(0.4));
  CHECK_FALSE(t.degenerate);
  const double tie[] = {0.5, 0.5};
  const PolicyTable d = enumerate_policies(tie);
  CHECK(d.degenerate);
  CHECK(d.gap == 0.0);
  CHECK(d.rows[0].policy == Policy::arm(0));
}

TEST_CASE("enumeration agrees with backward induction") {
  Rng rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    const TabularMdp m = random_tabular_mdp(2, 2, 2, rng);
    const PolicyTable t = enumerate_policies(m);
    CHECK(t.rows.size() == 16);
    CHECK(std::abs(t.rows[0].value - solve_optimal(m, m.kernel).v1[m.s1]) <= 1e-12);
    const PolicyTable r = enumerate_reachable_policies(m);
    CHECK(std::abs(r.rows[0].value - t.rows[0].value) <= 1e-12);
    CHECK(r.rows.size() <= t.rows.size());
  }
}

TEST_CASE("enumeration refuses large MDPs") {
  Rng rng(2);
  const TabularMdp m = random_tabular_mdp(6, 2, 4, rng);
  CHECK_THROWS_AS(enumerate_policies(m), ContractError);
}

TEST_CASE("best value excluding the optimum is the runner-up") {
  Rng rng(3);
  const TabularMdp m = random_tabular_mdp(2, 2, 2, rng);
  const PolicyTable t = enumerate_policies(m);
  CHECK(best_value_excluding(m, t.rows[0].policy) == doctest::Approx(t.rows[1].value));
  CHECK(best_value_excluding(m, t.rows[5].policy) == doctest::Approx(t.rows[0].value));
}

TEST_CASE("vertex oracle") {
  Rng rng(4);
  const TabularMdp m = random_tabular_mdp(3, 2, 2, rng);
  CHECK(vertex_sup(m, m.kernel, m.kernel) == 0.0);
  Kernel k = m.kernel;
  k.sigma[3] = std::min(m.kernel.sigma[3] + 0.1, 0.5) ;
  const double ds = std::abs(k.sigma[3] - m.kernel.sigma[3]);
  CHECK(vertex_sup(m, m.kernel, k) == doctest::Approx(2 * ds));
  const TabularMdp big = random_tabular_mdp(13, 1, 1, rng);
  CHECK_THROWS_AS(vertex_sup(big, big.kernel, big.kernel), ContractError);
}

TEST_CASE("grid design") {
  Vec a(2), b(2);
  a << 1, 0;
  b << 0, 1;
  const std::vector<Vec> single{a};
  const GridDesign g1 = simplex_design_search(single, 0.01);
  CHECK(g1.objective == doctest::Approx(1.0));
  const std::vector<Vec> both{a, b};
  const GridDesign g2 = simplex_design_search(both, 0.01);
  CHECK(g2.objective == doctest::Approx(2.0));
  CHECK(g2.weights[0] == doctest::Approx(0.5));
  const Design d = compute_design(both, 2);
  CHECK(d.objective == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("lower-bound instance, exact regret") {
  const LowerBoundTrace t = lower_bound_trace(100, 10000);
  CHECK(t.regret == doctest::Approx(2178.0).epsilon(1e-12));
  CHECK(t.closed_form == doctest::Approx(2178.0).epsilon(1e-12));
  CHECK(t.eps == doctest::Approx(0.1));
  CHECK(t.suboptimal_large == 99);
  CHECK(t.suboptimal_small == 9900);
  REQUIRE(t.signs.size() == 10000);
  CHECK(t.signs[0] == 1);
  for (int s = 2; s <= 100; ++s) CHECK(t.signs[s - 1] == -1);
  int flipped = 0;
  for (int s = 101; s <= 10000; ++s) flipped += t.signs[s - 1] != -1;
  CHECK(flipped == 0);

  CHECK(lower_bound_trace(1, 100).regret == doctest::Approx(19.8));
  CHECK(lower_bound_trace(0, 100).regret == 0.0);
  CHECK(lower_bound_closed_form(0, 100) == 0.0);
  for (long long C : {1LL, 7LL, 50LL, 99LL})
    CHECK(lower_bound_trace(C, 100).regret == doctest::Approx(lower_bound_closed_form(C, 100)).epsilon(1e-12));
}
