#include "dialshape/policies.hpp"

namespace dialshape {

ScriptedPolicy::ScriptedPolicy(const Ontology& ontology,
                               const SystemActionSpace& space)
    : ontology_(&ontology), space_(&space) {}

void ScriptedPolicy::reset() {
  grounded_.clear();
  pending_request_.clear();
  want_alternative_ = false;
  offer_made_ = false;
  grounding_version_ = 0;
  offered_version_ = -1;
}

SystemAction ScriptedPolicy::act(const PolicyContext& ctx) {
  if (ctx.last_observation != nullptr) {
    const DialogueAct& act = ctx.last_observation->observed_act;
    const DecodedSystemAct* last = ctx.last_system_act;
    switch (act.type) {
      case ActType::inform:
        if (ontology_->constraint_slot_index(act.slot) >= 0 &&
            (act.value == kDontCare ||
             ontology_->is_constraint_value(act.slot, act.value))) {
          grounded_[act.slot] = act.value;
          ++grounding_version_;
        }
        break;
      case ActType::affirm:
        if (last != nullptr && last->kind == SystemActKind::confirm) {
          grounded_[last->slot] = last->value;
        }
        break;
      case ActType::negate:
        if (last != nullptr && last->kind == SystemActKind::confirm) {
          grounded_.erase(last->slot);
          ++grounding_version_;
        }
        break;
      case ActType::request:
        if (ontology_->request_slot_index(act.slot) >= 0) {
          pending_request_ = act.slot;
        }
        break;
      case ActType::reqalts:
        want_alternative_ = true;
        break;
      default:
        break;
    }
  }

  if (!pending_request_.empty() && offer_made_) {
    const std::string slot = pending_request_;
    pending_request_.clear();
    return space_->action(SystemActKind::inform_requested, slot);
  }
  if (want_alternative_) {
    want_alternative_ = false;
    return space_->action(SystemActKind::inform_alternative);
  }
  for (const auto& slot : ontology_->constraint_slots) {
    if (!grounded_.count(slot.name)) {
      return space_->action(SystemActKind::request, slot.name);
    }
  }
  if (!offer_made_ || offered_version_ != grounding_version_) {
    offer_made_ = true;
    offered_version_ = grounding_version_;
    return space_->action(SystemActKind::inform_offer);
  }
  return space_->action(SystemActKind::reqmore);
}

RandomPolicy::RandomPolicy(const SystemActionSpace& space, std::uint64_t seed)
    : n_actions_(space.size()), rng_(seed) {}

SystemAction RandomPolicy::act(const PolicyContext&) {
  return SystemAction{static_cast<int>(rng_.uniform_index(n_actions_))};
}

MixturePolicy::MixturePolicy(const Ontology& ontology,
                             const SystemActionSpace& space, double mix,
                             std::uint64_t seed)
    : scripted_(ontology, space), n_actions_(space.size()), mix_(mix), rng_(seed) {}

void MixturePolicy::reset() { scripted_.reset(); }

SystemAction MixturePolicy::act(const PolicyContext& ctx) {
  // The scripted policy always sees the turn so its grounding stays current
  // even when the sampled action is random.
  const SystemAction scripted = scripted_.act(ctx);
  if (rng_.bernoulli(mix_)) return scripted;
  return SystemAction{static_cast<int>(rng_.uniform_index(n_actions_))};
}

}  // namespace dialshape
