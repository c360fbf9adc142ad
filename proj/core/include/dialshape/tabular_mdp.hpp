#pragma once

#include <vector>

namespace dialshape {

/// Small enumerable MDP for exact-solution oracles. Transitions are listed
/// per (state, action); terminal states bootstrap with value 0.
struct TabularMdp {
  struct Outcome {
    int next_state = 0;
    double probability = 1.0;
    double reward = 0.0;
  };

  int n_states = 0;
  int n_actions = 0;
  std::vector<std::vector<std::vector<Outcome>>> transitions;  // [s][a]
  std::vector<bool> terminal;

  static TabularMdp make(int n_states, int n_actions);
  void add(int s, int a, int next, double prob, double reward);
  void validate() const;  // probabilities sum to 1 per (s, a)
};

struct ValueIterationResult {
  std::vector<double> values;                 // V*(s)
  std::vector<std::vector<double>> q;         // Q*(s, a)
  int iterations = 0;
  bool converged = false;
};

/// Exact value iteration to sup-norm tolerance. Throws std::runtime_error
/// if the iteration cap is reached without convergence.
ValueIterationResult value_iteration(const TabularMdp& mdp, double gamma,
                                     double tolerance = 1e-12,
                                     int max_iterations = 1000000);

/// Greedy action sets per state: all actions within tie_tolerance of the
/// per-state max Q. Terminal states yield empty sets.
std::vector<std::vector<int>> greedy_argmax_sets(const TabularMdp& mdp,
                                                 const ValueIterationResult& vi,
                                                 double tie_tolerance = 1e-9);

/// Returns a copy of the MDP with rewards replaced by
/// r + gamma * phi(s') - phi(s).
TabularMdp shaped_mdp(const TabularMdp& mdp, const std::vector<double>& potential,
                      double gamma);

/// Solves the MDP with and without potential shaping and reports whether
/// the greedy argmax sets agree in every non-terminal state. The potential
/// must be 0 at terminal states for the guarantee to apply.
bool policy_invariance_check(const TabularMdp& mdp,
                             const std::vector<double>& potential, double gamma);

}  // namespace dialshape
