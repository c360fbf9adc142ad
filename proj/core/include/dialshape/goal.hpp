#pragma once

#include <map>
#include <set>
#include <string>

#include "dialshape/ontology.hpp"
#include "dialshape/rng.hpp"

namespace dialshape {

/// What the simulated user wants: slot=value constraints plus the slots it
/// will ask about once a venue has been offered. Both are non-empty.
struct UserGoal {
  std::map<std::string, std::string> constraints;
  std::set<std::string> requests;

  bool satisfiable(const Ontology& ontology) const {
    return !ontology.matching_venues(constraints).empty();
  }
};

struct GoalSamplerConfig {
  /// Probability that each constraint slot is part of the goal. Resampled
  /// if the result would be empty.
  std::map<std::string, double> constraint_probs;  // default 1.0 per slot
  /// Probability that each request slot is requested. Resampled if empty.
  double request_prob = 0.5;

  double constraint_prob(const std::string& slot) const {
    auto it = constraint_probs.find(slot);
    return it == constraint_probs.end() ? 1.0 : it->second;
  }
};

UserGoal sample_goal(const Ontology& ontology, Rng& rng,
                     const GoalSamplerConfig& cfg = {});

}  // namespace dialshape
