#include "dialshape/error_channel.hpp"

#include <stdexcept>
#include <vector>

namespace dialshape {

namespace {

DialogueAct substitute_value(const DialogueAct& act, const Ontology& ontology,
                             Rng& rng) {
  const int idx = ontology.constraint_slot_index(act.slot);
  if (idx < 0) return act;
  const auto& values = ontology.constraint_slots[idx].values;
  std::vector<std::string> candidates;
  for (const auto& v : values) {
    if (v != act.value) candidates.push_back(v);
  }
  if (act.value != kDontCare) candidates.push_back(kDontCare);
  if (candidates.empty()) return act;
  DialogueAct out = act;
  out.value = candidates[rng.uniform_index(candidates.size())];
  return out;
}

DialogueAct substitute_type(const DialogueAct& act, const Ontology& ontology,
                            Rng& rng) {
  // Draw a confusable act of a different type. Slot-bearing targets get a
  // random slot (and value, for inform) so the corruption is well-formed.
  for (int tries = 0; tries < 16; ++tries) {
    const auto type = static_cast<ActType>(rng.uniform_index(kNumActTypes));
    if (type == act.type) continue;
    switch (type) {
      case ActType::inform: {
        const auto& slot =
            ontology.constraint_slots[rng.uniform_index(ontology.constraint_slots.size())];
        return DialogueAct::inform(slot.name,
                                   slot.values[rng.uniform_index(slot.values.size())]);
      }
      case ActType::request: {
        if (ontology.request_slots.empty()) continue;
        return DialogueAct::request(
            ontology.request_slots[rng.uniform_index(ontology.request_slots.size())]);
      }
      case ActType::confirm:
        continue;  // users do not confirm in this channel
      default:
        return DialogueAct::bare(type);
    }
  }
  return DialogueAct::bare(ActType::null_act);
}

}  // namespace

Observation corrupt(const DialogueAct& true_act, double ser,
                    const Ontology& ontology, Rng& rng) {
  if (!(ser >= 0.0 && ser <= 1.0)) {
    throw std::invalid_argument("semantic error rate must be in [0, 1]");
  }

  Observation obs;
  obs.observed_act = true_act;
  obs.is_corrupted = rng.bernoulli(ser);
  if (obs.is_corrupted) {
    const bool has_value =
        true_act.type == ActType::inform && !true_act.value.empty();
    if (has_value && rng.bernoulli(0.7)) {
      obs.observed_act = substitute_value(true_act, ontology, rng);
    } else {
      obs.observed_act = substitute_type(true_act, ontology, rng);
    }
    obs.confidence = rng.beta_int(2, 4);
  } else {
    obs.confidence = rng.beta_int(6, 2);
  }
  return obs;
}

}  // namespace dialshape
