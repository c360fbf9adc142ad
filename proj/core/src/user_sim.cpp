#include "dialshape/user_sim.hpp"

#include <stdexcept>
#include <vector>

namespace dialshape {

std::string DecodedSystemAct::describe(const SystemActionSpace& space,
                                       const Ontology& ontology) const {
  std::string out = space.name(action);
  if (venue >= 0) out += "[" + ontology.venues.at(venue).name + "]";
  if (!value.empty()) out += "=" + value;
  return out;
}

UserSimulator::UserSimulator(const Ontology& ontology, UserGoal goal)
    : ontology_(&ontology), goal_(std::move(goal)) {
  for (const auto& slot : ontology_->constraint_slots) {
    const auto it = goal_.constraints.find(slot.name);
    if (it != goal_.constraints.end()) {
      agenda_.push_back(DialogueAct::inform(slot.name, it->second));
    }
  }
}

DialogueAct UserSimulator::answer_slot_query(const std::string& slot) {
  // Answering a direct question also settles the matching agenda item.
  for (auto it = agenda_.begin(); it != agenda_.end(); ++it) {
    if (it->type == ActType::inform && it->slot == slot) {
      agenda_.erase(it);
      break;
    }
  }
  const auto it = goal_.constraints.find(slot);
  const std::string value = (it == goal_.constraints.end()) ? kDontCare : it->second;
  return DialogueAct::inform(slot, value);
}

bool UserSimulator::all_requests_filled() const {
  for (const auto& slot : goal_.requests) {
    if (filled_requests_.find(slot) == filled_requests_.end()) return false;
  }
  return true;
}

DialogueAct UserSimulator::finish() {
  finished_ = true;
  return DialogueAct::bare(ActType::bye);
}

DialogueAct UserSimulator::next_from_agenda(Rng& rng) {
  if (!agenda_.empty()) {
    DialogueAct act = agenda_.front();
    agenda_.pop_front();
    return act;
  }
  if (offer_acceptable()) {
    for (const auto& slot : ontology_->request_slots) {
      if (goal_.requests.count(slot) && !filled_requests_.count(slot)) {
        return DialogueAct::request(slot);
      }
    }
    return finish();
  }
  if (current_offer_ >= 0 && !offer_consistent_) {
    return DialogueAct::bare(ActType::reqalts);
  }
  // Nothing pending and no offer on the table: restate a goal constraint so
  // a mishearing can be repaired.
  std::vector<std::string> slots;
  for (const auto& [slot, value] : goal_.constraints) slots.push_back(slot);
  const auto& slot = slots[rng.uniform_index(slots.size())];
  return DialogueAct::inform(slot, goal_.constraints.at(slot));
}

DialogueAct UserSimulator::handle_offer(int venue_index, bool offered_none) {
  if (offered_none) {
    heard_none_offer_ = true;
    current_offer_ = -1;
    offer_consistent_ = false;
    if (!goal_.satisfiable(*ontology_)) return finish();
    // The system is wrong; restate the first goal constraint.
    const auto& [slot, value] = *goal_.constraints.begin();
    return DialogueAct::inform(slot, value);
  }

  const Venue& venue = ontology_->venues.at(venue_index);
  std::string violated;
  for (const auto& [slot, value] : goal_.constraints) {
    if (value == kDontCare) continue;
    const auto it = venue.attributes.find(slot);
    if (it == venue.attributes.end() || it->second != value) {
      violated = slot;
      break;
    }
  }
  current_offer_ = venue_index;
  offer_consistent_ = violated.empty();
  if (!offer_consistent_) {
    return DialogueAct::inform(violated, goal_.constraints.at(violated));
  }
  filled_requests_.clear();
  for (const auto& slot : ontology_->request_slots) {
    if (goal_.requests.count(slot)) return DialogueAct::request(slot);
  }
  return finish();
}

DialogueAct UserSimulator::respond(const DecodedSystemAct& system_act, Rng& rng) {
  if (finished_) throw std::logic_error("user already said bye");

  switch (system_act.kind) {
    case SystemActKind::request:
    case SystemActKind::select:
      return answer_slot_query(system_act.slot);

    case SystemActKind::confirm: {
      const auto it = goal_.constraints.find(system_act.slot);
      const std::string want = (it == goal_.constraints.end()) ? kDontCare : it->second;
      if (system_act.value == want) return DialogueAct::bare(ActType::affirm);
      if (rng.bernoulli(0.5)) return DialogueAct::bare(ActType::negate);
      return DialogueAct::inform(system_act.slot, want);
    }

    case SystemActKind::inform_offer:
    case SystemActKind::inform_alternative:
    case SystemActKind::inform_none:
      return handle_offer(system_act.venue, system_act.offered_none);

    case SystemActKind::inform_requested: {
      if (offer_acceptable() && system_act.venue == current_offer_) {
        filled_requests_.insert(system_act.slot);
        if (all_requests_filled()) return finish();
        for (const auto& slot : ontology_->request_slots) {
          if (goal_.requests.count(slot) && !filled_requests_.count(slot)) {
            return DialogueAct::request(slot);
          }
        }
        return finish();
      }
      return next_from_agenda(rng);
    }

    case SystemActKind::restart: {
      agenda_.clear();
      for (const auto& slot : ontology_->constraint_slots) {
        const auto it = goal_.constraints.find(slot.name);
        if (it != goal_.constraints.end()) {
          agenda_.push_back(DialogueAct::inform(slot.name, it->second));
        }
      }
      current_offer_ = -1;
      offer_consistent_ = false;
      heard_none_offer_ = false;
      filled_requests_.clear();
      return next_from_agenda(rng);
    }

    case SystemActKind::bye:
      return finish();

    case SystemActKind::hello:
    case SystemActKind::repeat:
    case SystemActKind::reqmore:
      return next_from_agenda(rng);
  }
  throw std::logic_error("unhandled system act kind");
}

}  // namespace dialshape
