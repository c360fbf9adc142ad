#include "dialshape/belief.hpp"

#include <optional>
#include <stdexcept>

namespace dialshape {

bool BeliefState::operator==(const BeliefState& other) const {
  if (goal.size() != other.goal.size()) return false;
  for (size_t i = 0; i < goal.size(); ++i) {
    if (goal[i].size() != other.goal[i].size() || goal[i] != other.goal[i]) {
      return false;
    }
  }
  return method.size() == other.method.size() && method == other.method &&
         discourse.size() == other.discourse.size() && discourse == other.discourse;
}

BeliefTracker::BeliefTracker(const Ontology& ontology) : ontology_(&ontology) {}

int BeliefTracker::goal_dim() const {
  int dim = 0;
  for (const auto& slot : ontology_->constraint_slots) {
    dim += static_cast<int>(slot.values.size()) + 1;
  }
  return dim;
}

BeliefState BeliefTracker::init() const {
  BeliefState b;
  for (const auto& slot : ontology_->constraint_slots) {
    const int n = static_cast<int>(slot.values.size()) + 1;
    b.goal.push_back(Eigen::VectorXd::Constant(n, 1.0 / n));
  }
  b.method = Eigen::VectorXd::Zero(kNumMethods);
  b.method[static_cast<int>(Method::none)] = 1.0;
  b.discourse = Eigen::VectorXd::Constant(kNumActTypes, 1.0 / kNumActTypes);
  return b;
}

namespace {

/// posterior = c * point(index) + (1-c) * prior
void blend_point(Eigen::VectorXd& dist, int index, double c) {
  dist *= (1.0 - c);
  dist[index] += c;
}

/// Removes confidence-weighted mass from `index`, redistributing it over the
/// other entries in proportion to their current mass.
void negate_value(Eigen::VectorXd& dist, int index, double c) {
  const double pv = dist[index];
  const double moved = c * pv;
  const double rest = 1.0 - pv;
  if (rest > 1e-12) {
    for (int i = 0; i < dist.size(); ++i) {
      if (i != index) dist[i] += moved * dist[i] / rest;
    }
  } else {
    const double share = moved / static_cast<double>(dist.size() - 1);
    for (int i = 0; i < dist.size(); ++i) {
      if (i != index) dist[i] += share;
    }
  }
  dist[index] = pv - moved;
}

}  // namespace

BeliefState BeliefTracker::update(const BeliefState& belief,
                                  const Observation& obs,
                                  const DecodedSystemAct& last_system_act) const {
  const auto& slots = ontology_->constraint_slots;
  if (belief.goal.size() != slots.size() ||
      belief.method.size() != kNumMethods ||
      belief.discourse.size() != kNumActTypes) {
    throw std::invalid_argument("belief shape does not match ontology");
  }
  for (size_t i = 0; i < slots.size(); ++i) {
    if (belief.goal[i].size() != static_cast<int>(slots[i].values.size()) + 1) {
      throw std::invalid_argument("belief goal distribution has wrong size");
    }
  }

  BeliefState out = belief;
  const DialogueAct& act = obs.observed_act;
  const double c = obs.confidence;

  // Goal evidence. "dontcare" carries no value preference and is ignored.
  auto value_index = [&](int slot_idx, const std::string& value) -> int {
    const auto& values = slots[slot_idx].values;
    for (size_t i = 0; i < values.size(); ++i) {
      if (values[i] == value) return static_cast<int>(i);
    }
    return -1;
  };

  switch (act.type) {
    case ActType::inform: {
      const int s = ontology_->constraint_slot_index(act.slot);
      if (s >= 0 && act.value != kDontCare) {
        const int v = value_index(s, act.value);
        if (v >= 0) blend_point(out.goal[s], v, c);
      }
      break;
    }
    case ActType::affirm: {
      if (last_system_act.kind == SystemActKind::confirm) {
        const int s = ontology_->constraint_slot_index(last_system_act.slot);
        if (s >= 0 && last_system_act.value != kDontCare) {
          const int v = value_index(s, last_system_act.value);
          if (v >= 0) blend_point(out.goal[s], v, c);
        }
      }
      break;
    }
    case ActType::negate: {
      if (last_system_act.kind == SystemActKind::confirm) {
        const int s = ontology_->constraint_slot_index(last_system_act.slot);
        if (s >= 0 && last_system_act.value != kDontCare) {
          const int v = value_index(s, last_system_act.value);
          if (v >= 0) negate_value(out.goal[s], v, c);
        }
      }
      break;
    }
    default:
      break;
  }

  // Method evidence.
  std::optional<Method> target;
  if (act.type == ActType::inform) target = Method::byconstraints;
  if (act.type == ActType::reqalts) target = Method::byalternatives;
  if (act.type == ActType::bye) target = Method::finished;
  if (target) blend_point(out.method, static_cast<int>(*target), c);

  // Discourse: previous turn's act distribution is replaced wholesale.
  out.discourse = Eigen::VectorXd::Constant(kNumActTypes,
                                            (1.0 - c) / kNumActTypes);
  out.discourse[static_cast<int>(act.type)] += c;

  return out;
}

}  // namespace dialshape
