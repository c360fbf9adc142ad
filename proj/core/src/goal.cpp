#include "dialshape/goal.hpp"

namespace dialshape {

UserGoal sample_goal(const Ontology& ontology, Rng& rng,
                     const GoalSamplerConfig& cfg) {
  UserGoal goal;
  // Constraints: each slot joins the goal with its configured probability;
  // an included slot is dontcare 10% of the time. Never all-empty.
  do {
    goal.constraints.clear();
    for (const auto& slot : ontology.constraint_slots) {
      if (!rng.bernoulli(cfg.constraint_prob(slot.name))) continue;
      if (rng.bernoulli(0.1)) {
        goal.constraints[slot.name] = kDontCare;
      } else {
        goal.constraints[slot.name] = rng.pick(slot.values);
      }
    }
  } while (goal.constraints.empty());

  do {
    goal.requests.clear();
    for (const auto& slot : ontology.request_slots) {
      if (rng.bernoulli(cfg.request_prob)) goal.requests.insert(slot);
    }
  } while (goal.requests.empty() && !ontology.request_slots.empty());

  return goal;
}

}  // namespace dialshape
