#pragma once

// Shared fixture: a 3-state episodic MDP with one-hot features, solvable
// exactly by value iteration and learnable by the GP posterior with a
// linear kernel. Used by the unit tests and the acceptance gate.

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "dialshape/gpsarsa.hpp"
#include "dialshape/rng.hpp"
#include "dialshape/tabular_mdp.hpp"

namespace tiny {

inline constexpr int kStates = 3;
inline constexpr int kActions = 2;

inline dialshape::TabularMdp make_mdp() {
  auto mdp = dialshape::TabularMdp::make(kStates + 1, kActions);  // +1 terminal
  const int term = kStates;
  mdp.terminal[term] = true;
  // s0: a0 leads to the high-value branch, a1 pays out immediately.
  mdp.add(0, 0, 1, 1.0, 0.0);
  mdp.add(0, 1, 2, 1.0, 1.0);
  // s1: a0 is the jackpot.
  mdp.add(1, 0, term, 1.0, 4.0);
  mdp.add(1, 1, term, 1.0, 0.0);
  // s2: both actions tie.
  mdp.add(2, 0, term, 1.0, 1.0);
  mdp.add(2, 1, term, 1.0, 1.0);
  for (int a = 0; a < kActions; ++a) mdp.add(term, a, term, 1.0, 0.0);
  mdp.validate();
  return mdp;
}

inline Eigen::VectorXd state_features(int s) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(kStates);
  f[s] = 1.0;
  return f;
}

/// Runs episodic GP-SARSA with posterior-sample exploration and noisy
/// rewards, then checks the greedy policy against the value-iteration
/// argmax sets in every non-terminal state.
inline bool learns_optimal_policy(std::uint64_t seed, int episodes) {
  using namespace dialshape;
  const auto mdp = make_mdp();
  const auto vi = value_iteration(mdp, 1.0);
  const auto optimal = greedy_argmax_sets(mdp, vi);

  KernelConfig kcfg;
  kcfg.noise_variance = 1.0;
  kcfg.prior_scale = 5.0;
  kcfg.sparsify_threshold = 0.01;
  kcfg.dictionary_cap = 100;
  GpPosterior gp(kStates, kActions, kcfg);
  Rng rng(seed);

  for (int ep = 0; ep < episodes; ++ep) {
    int s = 0;
    int a = gp.select_posterior_sample(state_features(s), rng);
    while (true) {
      const auto& outcome = mdp.transitions[s][a][0];  // deterministic moves
      const double reward = outcome.reward + 0.3 * rng.normal();
      const int next = outcome.next_state;
      if (mdp.terminal[next]) {
        gp.observe(state_features(s), a, reward, Eigen::VectorXd(), 0, true, 1.0);
        break;
      }
      const int next_a = gp.select_posterior_sample(state_features(next), rng);
      gp.observe(state_features(s), a, reward, state_features(next), next_a,
                 false, 1.0);
      s = next;
      a = next_a;
    }
    gp.end_episode();
  }

  for (int s = 0; s < kStates; ++s) {
    const int greedy = gp.select_greedy(state_features(s));
    bool ok = false;
    for (const int opt : optimal[s]) ok = ok || greedy == opt;
    if (!ok) return false;
  }
  return true;
}

}  // namespace tiny
