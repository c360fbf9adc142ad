#include "dialshape/tabular_mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dialshape {

TabularMdp TabularMdp::make(int n_states, int n_actions) {
  TabularMdp mdp;
  mdp.n_states = n_states;
  mdp.n_actions = n_actions;
  mdp.transitions.assign(n_states, std::vector<std::vector<Outcome>>(n_actions));
  mdp.terminal.assign(n_states, false);
  return mdp;
}

void TabularMdp::add(int s, int a, int next, double prob, double reward) {
  transitions.at(s).at(a).push_back({next, prob, reward});
}

void TabularMdp::validate() const {
  for (int s = 0; s < n_states; ++s) {
    if (terminal[s]) continue;
    for (int a = 0; a < n_actions; ++a) {
      double total = 0.0;
      for (const auto& o : transitions[s][a]) {
        if (o.next_state < 0 || o.next_state >= n_states) {
          throw std::invalid_argument("transition to unknown state");
        }
        total += o.probability;
      }
      if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("transition probabilities do not sum to 1");
      }
    }
  }
}

ValueIterationResult value_iteration(const TabularMdp& mdp, double gamma,
                                     double tolerance, int max_iterations) {
  mdp.validate();
  ValueIterationResult res;
  res.values.assign(mdp.n_states, 0.0);
  res.q.assign(mdp.n_states, std::vector<double>(mdp.n_actions, 0.0));

  for (int it = 1; it <= max_iterations; ++it) {
    double delta = 0.0;
    for (int s = 0; s < mdp.n_states; ++s) {
      if (mdp.terminal[s]) continue;
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < mdp.n_actions; ++a) {
        double q = 0.0;
        for (const auto& o : mdp.transitions[s][a]) {
          const double cont = mdp.terminal[o.next_state] ? 0.0 : res.values[o.next_state];
          q += o.probability * (o.reward + gamma * cont);
        }
        res.q[s][a] = q;
        best = std::max(best, q);
      }
      delta = std::max(delta, std::abs(best - res.values[s]));
      res.values[s] = best;
    }
    res.iterations = it;
    if (delta < tolerance) {
      res.converged = true;
      return res;
    }
  }
  throw std::runtime_error("value iteration did not converge");
}

std::vector<std::vector<int>> greedy_argmax_sets(const TabularMdp& mdp,
                                                 const ValueIterationResult& vi,
                                                 double tie_tolerance) {
  std::vector<std::vector<int>> sets(mdp.n_states);
  for (int s = 0; s < mdp.n_states; ++s) {
    if (mdp.terminal[s]) continue;
    const double best = *std::max_element(vi.q[s].begin(), vi.q[s].end());
    for (int a = 0; a < mdp.n_actions; ++a) {
      if (vi.q[s][a] >= best - tie_tolerance) sets[s].push_back(a);
    }
  }
  return sets;
}

TabularMdp shaped_mdp(const TabularMdp& mdp, const std::vector<double>& potential,
                      double gamma) {
  if (static_cast<int>(potential.size()) != mdp.n_states) {
    throw std::invalid_argument("potential table size mismatch");
  }
  TabularMdp out = mdp;
  for (int s = 0; s < mdp.n_states; ++s) {
    for (int a = 0; a < mdp.n_actions; ++a) {
      for (auto& o : out.transitions[s][a]) {
        // Raw formula, no terminal special-casing: the invariance guarantee
        // is the caller's responsibility (zero potential at terminals).
        o.reward += gamma * potential[o.next_state] - potential[s];
      }
    }
  }
  return out;
}

bool policy_invariance_check(const TabularMdp& mdp,
                             const std::vector<double>& potential, double gamma) {
  const auto base = value_iteration(mdp, gamma);
  const auto shaped = value_iteration(shaped_mdp(mdp, potential, gamma), gamma);
  return greedy_argmax_sets(mdp, base) == greedy_argmax_sets(mdp, shaped);
}

}  // namespace dialshape
