#include "dialshape/environment.hpp"

#include <algorithm>
#include <stdexcept>

namespace dialshape {

DialogueEnv::DialogueEnv(const Ontology& ontology, EnvConfig cfg)
    : ontology_(&ontology), space_(ontology), cfg_(std::move(cfg)) {
  ontology_->validate();
}

void DialogueEnv::reset(std::uint64_t episode_seed) {
  rng_ = Rng(episode_seed);
  reset_state(sample_goal(*ontology_, rng_, cfg_.goal_sampler));
}

void DialogueEnv::reset(std::uint64_t episode_seed, UserGoal goal) {
  rng_ = Rng(episode_seed);
  reset_state(std::move(goal));
}

void DialogueEnv::reset_state(UserGoal goal) {
  user_ = std::make_unique<UserSimulator>(*ontology_, std::move(goal));
  done_ = false;
  turn_count_ = 0;
  heard_constraints_.clear();
  current_offer_ = -1;
  none_asserted_ = false;
  offered_venues_.clear();
  informed_requests_.clear();
}

bool DialogueEnv::venue_consistent_with_goal(int venue) const {
  const Venue& v = ontology_->venues.at(venue);
  for (const auto& [slot, value] : user_->goal().constraints) {
    if (value == kDontCare) continue;
    const auto it = v.attributes.find(slot);
    if (it == v.attributes.end() || it->second != value) return false;
  }
  return true;
}

DecodedSystemAct DialogueEnv::decode(SystemAction action) {
  DecodedSystemAct out;
  out.action = action;
  out.kind = space_.kind(action);
  out.slot = space_.slot(action);

  switch (out.kind) {
    case SystemActKind::request:
      break;

    case SystemActKind::confirm: {
      const auto it = heard_constraints_.find(out.slot);
      if (it == heard_constraints_.end()) {
        out.kind = SystemActKind::request;  // nothing to confirm yet
      } else {
        out.value = it->second;
      }
      break;
    }

    case SystemActKind::select: {
      const auto it = heard_constraints_.find(out.slot);
      if (it != heard_constraints_.end()) out.value = it->second;
      break;
    }

    case SystemActKind::inform_offer: {
      const auto matches = ontology_->matching_venues(heard_constraints_);
      if (matches.empty()) {
        out.kind = SystemActKind::inform_none;
        out.offered_none = true;
      } else {
        out.venue = matches.front();
      }
      break;
    }

    case SystemActKind::inform_alternative: {
      const auto matches = ontology_->matching_venues(heard_constraints_);
      if (matches.empty()) {
        out.kind = SystemActKind::inform_none;
        out.offered_none = true;
        break;
      }
      // Prefer a match not yet offered, else any match other than the
      // current offer, else re-offer the only candidate.
      int pick = -1;
      for (const int v : matches) {
        if (!offered_venues_.count(v)) {
          pick = v;
          break;
        }
      }
      if (pick < 0) {
        for (const int v : matches) {
          if (v != current_offer_) {
            pick = v;
            break;
          }
        }
      }
      if (pick < 0) pick = matches.front();
      out.venue = pick;
      break;
    }

    case SystemActKind::inform_requested: {
      if (current_offer_ >= 0) {
        out.venue = current_offer_;
        const auto& attrs = ontology_->venues.at(current_offer_).attributes;
        const auto it = attrs.find(out.slot);
        if (it != attrs.end()) out.value = it->second;
      }
      break;
    }

    case SystemActKind::inform_none:
      out.offered_none = true;
      break;

    case SystemActKind::repeat:
    case SystemActKind::reqmore:
    case SystemActKind::restart:
    case SystemActKind::bye:
    case SystemActKind::hello:
      break;
  }
  return out;
}

void DialogueEnv::apply_system_effects(const DecodedSystemAct& act) {
  switch (act.kind) {
    case SystemActKind::inform_offer:
    case SystemActKind::inform_alternative:
      current_offer_ = act.venue;
      offered_venues_.insert(act.venue);
      break;
    case SystemActKind::inform_none:
      none_asserted_ = true;
      current_offer_ = -1;
      break;
    case SystemActKind::inform_requested:
      if (act.venue >= 0) informed_requests_[act.venue].insert(act.slot);
      break;
    case SystemActKind::restart:
      heard_constraints_.clear();
      current_offer_ = -1;
      none_asserted_ = false;
      break;
    default:
      break;
  }
}

void DialogueEnv::absorb_observation(const Observation& obs,
                                     const DecodedSystemAct& system_act) {
  const DialogueAct& act = obs.observed_act;
  switch (act.type) {
    case ActType::inform:
      if (ontology_->constraint_slot_index(act.slot) >= 0 &&
          (act.value == kDontCare ||
           ontology_->is_constraint_value(act.slot, act.value))) {
        heard_constraints_[act.slot] = act.value;
      }
      break;
    case ActType::affirm:
      if (system_act.kind == SystemActKind::confirm) {
        heard_constraints_[system_act.slot] = system_act.value;
      }
      break;
    case ActType::negate:
      if (system_act.kind == SystemActKind::confirm) {
        heard_constraints_.erase(system_act.slot);
      }
      break;
    default:
      break;
  }
}

StepResult DialogueEnv::step(SystemAction action) {
  if (done_) throw std::logic_error("step on finished episode");
  if (!action.valid() || action.index >= space_.size()) {
    throw std::invalid_argument("invalid system action index");
  }

  StepResult result;
  result.system_act = decode(action);
  apply_system_effects(result.system_act);
  ++turn_count_;

  const DialogueAct true_act = user_->respond(result.system_act, rng_);
  result.observation = corrupt(true_act, cfg_.ser, *ontology_, rng_);
  absorb_observation(result.observation, result.system_act);

  done_ = user_->finished() || result.system_act.kind == SystemActKind::bye ||
          turn_count_ >= ontology_->max_turns;
  result.done = done_;
  result.reward = -1.0 + (done_ && objective_success() ? 20.0 : 0.0);
  return result;
}

bool DialogueEnv::objective_success() const {
  const UserGoal& goal = user_->goal();
  if (!goal.satisfiable(*ontology_)) return none_asserted_;
  for (const int v : offered_venues_) {
    if (!venue_consistent_with_goal(v)) continue;
    const auto it = informed_requests_.find(v);
    bool all = true;
    for (const auto& slot : goal.requests) {
      if (it == informed_requests_.end() || !it->second.count(slot)) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

GoalProgress DialogueEnv::progress() const {
  const UserGoal& goal = user_->goal();
  GoalProgress p;
  p.constraints_total = static_cast<int>(goal.constraints.size());
  for (const auto& [slot, value] : goal.constraints) {
    const auto it = heard_constraints_.find(slot);
    if (it != heard_constraints_.end() && it->second == value) {
      ++p.constraints_grounded;
    }
  }
  p.requests_total = static_cast<int>(goal.requests.size());
  int best = 0;
  for (const int v : offered_venues_) {
    if (!venue_consistent_with_goal(v)) continue;
    const auto it = informed_requests_.find(v);
    if (it == informed_requests_.end()) continue;
    int got = 0;
    for (const auto& slot : goal.requests) {
      if (it->second.count(slot)) ++got;
    }
    best = std::max(best, got);
  }
  p.requests_informed = best;
  p.none_correctly_asserted = none_asserted_ && !goal.satisfiable(*ontology_);
  return p;
}

}  // namespace dialshape
