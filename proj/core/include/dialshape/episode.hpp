#pragma once

#include <Eigen/Core>
#include <vector>

#include "dialshape/belief.hpp"
#include "dialshape/environment.hpp"

namespace dialshape {

/// One system+user exchange with everything downstream consumers need.
struct Turn {
  DecodedSystemAct system_act;
  Observation observation;
  BeliefState belief_after;
  Eigen::VectorXd features;
  double reward = 0.0;
};

/// A full dialogue trace. return_label is the sum of the per-turn
/// environmental rewards (20 * success - length under the default reward
/// scheme) and is the training target for return decomposition.
struct Episode {
  int id = 0;
  double ser = 0.0;
  std::vector<Turn> turns;
  UserGoal goal;
  bool success = false;
  double return_label = 0.0;

  int length() const { return static_cast<int>(turns.size()); }
};

}  // namespace dialshape
