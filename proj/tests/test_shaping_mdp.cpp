#include <cmath>
#include <stdexcept>
#include <vector>

#include "dialshape/rng.hpp"
#include "dialshape/shaping.hpp"
#include "dialshape/tabular_mdp.hpp"
#include "doctest.h"

using namespace dialshape;

TEST_CASE("shaping term is the discounted potential difference") {
  ShapingConfig cfg;
  cfg.gamma = 1.0;
  CHECK(shape(2.5, 4.0, 1.0, false, cfg) == doctest::Approx(1.5));
  CHECK(shape(3.0, 7.0, 1.0, true, cfg) == doctest::Approx(-3.0));  // terminal zeroing
  cfg.terminal_potential_zero = false;
  CHECK(shape(3.0, 7.0, 1.0, true, cfg) == doctest::Approx(4.0));
  CHECK(shape(2.0, 3.0, 0.5, false, cfg) == doctest::Approx(-0.5));
}

TEST_CASE("shape validates its inputs") {
  ShapingConfig cfg;
  CHECK_THROWS_AS(shape(1.0, 1.0, 0.0, false, cfg), std::invalid_argument);
  CHECK_THROWS_AS(shape(1.0, 1.0, 1.5, false, cfg), std::invalid_argument);
  CHECK_THROWS(shape(std::nan(""), 1.0, 1.0, false, cfg));
}

TEST_CASE("shaped stream: composite rewards and the telescoping identity") {
  Rng rng(42);
  ShapingConfig cfg;
  for (const double gamma : {0.9, 0.99, 1.0}) {
    cfg.gamma = gamma;
    for (int ep = 0; ep < 200; ++ep) {
      const int len = 1 + static_cast<int>(rng.uniform_index(30));
      std::vector<double> phi(len), rewards(len);
      for (int t = 0; t < len; ++t) {
        phi[t] = rng.uniform(-20.0, 20.0);
        rewards[t] = rng.uniform(-2.0, 2.0);
      }
      const double phi0 = rng.uniform(-5.0, 5.0);
      const auto stream = shaped_stream(phi, rewards, gamma, cfg, phi0);
      REQUIRE(stream.size() == static_cast<size_t>(len));

      double discounted_f = 0.0, pow = 1.0;
      for (int t = 0; t < len; ++t) {
        CHECK(stream[t].composite == stream[t].env_reward + stream[t].shaping_reward);
        CHECK(stream[t].env_reward == rewards[t]);
        discounted_f += pow * stream[t].shaping_reward;
        pow *= gamma;
      }
      // Sum of discounted shaping terms collapses to -phi_0 because the
      // terminal potential is forced to zero.
      CHECK(std::abs(discounted_f - (-phi0)) < 1e-9);
    }
  }
}

TEST_CASE("shaped stream rejects mismatched lengths") {
  ShapingConfig cfg;
  CHECK_THROWS_AS(shaped_stream({1.0, 2.0}, {1.0}, 1.0, cfg),
                  std::invalid_argument);
}

TEST_CASE("heuristic potential arithmetic") {
  GoalProgress p;
  p.constraints_grounded = 2;
  p.constraints_total = 3;
  p.requests_informed = 0;
  p.requests_total = 2;
  CHECK(oracle_heuristic_potential(p) == doctest::Approx(20.0 * (2.0 / 3.0) / 2.0));
  CHECK(oracle_heuristic_potential(p) == doctest::Approx(6.667).epsilon(1e-3));

  p.none_correctly_asserted = true;
  CHECK(oracle_heuristic_potential(p) == doctest::Approx(20.0));

  GoalProgress full;
  full.constraints_grounded = 3;
  full.constraints_total = 3;
  full.requests_informed = 2;
  full.requests_total = 2;
  CHECK(oracle_heuristic_potential(full) == doctest::Approx(20.0));

  GoalProgress empty;  // zero denominators contribute zero
  CHECK(oracle_heuristic_potential(empty) == doctest::Approx(0.0));
}

TEST_CASE("potential source names round-trip") {
  for (const auto s : {PotentialSource::none, PotentialSource::rnn,
                       PotentialSource::oracle_heuristic}) {
    CHECK(potential_source_from_name(potential_source_name(s)) == s);
  }
  CHECK(potential_source_from_name("oracle") == PotentialSource::oracle_heuristic);
  CHECK_THROWS(potential_source_from_name("psychic"));
}

TEST_CASE("value iteration solves a 3-state chain exactly") {
  auto mdp = TabularMdp::make(3, 1);
  mdp.add(0, 0, 1, 1.0, 1.0);
  mdp.add(1, 0, 2, 1.0, 2.0);
  mdp.terminal[2] = true;
  mdp.add(2, 0, 2, 1.0, 0.0);
  mdp.validate();

  const auto vi = value_iteration(mdp, 0.9);
  CHECK(vi.converged);
  CHECK(vi.values[2] == doctest::Approx(0.0));
  CHECK(vi.values[1] == doctest::Approx(2.0));
  CHECK(vi.values[0] == doctest::Approx(1.0 + 0.9 * 2.0));
}

TEST_CASE("validate rejects transition probabilities that do not sum to 1") {
  auto mdp = TabularMdp::make(2, 1);
  mdp.add(0, 0, 1, 0.5, 0.0);
  mdp.terminal[1] = true;
  mdp.add(1, 0, 1, 1.0, 0.0);
  CHECK_THROWS_AS(mdp.validate(), std::invalid_argument);
}

TEST_CASE("greedy argmax sets keep ties") {
  auto mdp = TabularMdp::make(2, 3);
  mdp.add(0, 0, 1, 1.0, 5.0);
  mdp.add(0, 1, 1, 1.0, 5.0);
  mdp.add(0, 2, 1, 1.0, 1.0);
  mdp.terminal[1] = true;
  for (int a = 0; a < 3; ++a) mdp.add(1, a, 1, 1.0, 0.0);

  const auto vi = value_iteration(mdp, 1.0);
  const auto sets = greedy_argmax_sets(mdp, vi);
  CHECK(sets[0] == std::vector<int>{0, 1});
  CHECK(sets[1].empty());  // terminal
}

TEST_CASE("potential shaping preserves greedy policies on random chains") {
  Rng rng(314);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 5;
    auto mdp = TabularMdp::make(n, 2);
    mdp.terminal[n - 1] = true;
    for (int s = 0; s < n; ++s) {
      for (int a = 0; a < 2; ++a) {
        if (mdp.terminal[s]) {
          mdp.add(s, a, s, 1.0, 0.0);
          continue;
        }
        // Two stochastic outcomes: forward or stay.
        const double p = 0.3 + 0.4 * rng.uniform01();
        mdp.add(s, a, std::min(s + 1, n - 1), p, rng.uniform(-1.0, 1.0));
        mdp.add(s, a, s, 1.0 - p, rng.uniform(-1.0, 1.0));
      }
    }
    mdp.validate();

    std::vector<double> potential(n);
    for (int s = 0; s < n; ++s) {
      potential[s] = mdp.terminal[s] ? 0.0 : rng.uniform(-10.0, 10.0);
    }
    CHECK(policy_invariance_check(mdp, potential, 0.95));
    CHECK(policy_invariance_check(mdp, potential, 1.0));
  }
}

TEST_CASE("nonzero terminal potential can flip the greedy policy") {
  // With gamma=1, a potential that rewards reaching one terminal over
  // another is not policy-invariant; the check must notice.
  auto mdp = TabularMdp::make(3, 2);
  mdp.add(0, 0, 1, 1.0, 1.0);  // better in the unshaped MDP
  mdp.add(0, 1, 2, 1.0, 0.0);
  mdp.terminal[1] = true;
  mdp.terminal[2] = true;
  for (int a = 0; a < 2; ++a) {
    mdp.add(1, a, 1, 1.0, 0.0);
    mdp.add(2, a, 2, 1.0, 0.0);
  }
  const std::vector<double> biased = {0.0, 0.0, 10.0};
  CHECK(!policy_invariance_check(mdp, biased, 1.0));
}

TEST_CASE("shaped_mdp rewrites rewards in place") {
  auto mdp = TabularMdp::make(2, 1);
  mdp.add(0, 0, 1, 1.0, 3.0);
  mdp.terminal[1] = true;
  mdp.add(1, 0, 1, 1.0, 0.0);
  const std::vector<double> potential = {2.0, 9.0};
  const auto shaped = shaped_mdp(mdp, potential, 0.5);
  CHECK(shaped.transitions[0][0][0].reward == doctest::Approx(3.0 + 0.5 * 9.0 - 2.0));
}
