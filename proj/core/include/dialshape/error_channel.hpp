#pragma once

#include "dialshape/acts.hpp"
#include "dialshape/ontology.hpp"
#include "dialshape/rng.hpp"

namespace dialshape {

/// What the system's input decoder reports: the (possibly corrupted) user
/// act plus a confidence score. is_corrupted records the channel branch for
/// analysis; learners must not read it.
struct Observation {
  DialogueAct observed_act;
  double confidence = 1.0;
  bool is_corrupted = false;
};

/// Semantic error channel. With probability `ser` the true act is replaced
/// by a confusable act (value substitution with prob 0.7 when the act
/// carries a value, act-type substitution otherwise or with prob 0.3) and
/// confidence is drawn from Beta(2,4); clean observations draw confidence
/// from Beta(6,2). Throws std::invalid_argument unless ser is in [0,1].
Observation corrupt(const DialogueAct& true_act, double ser,
                    const Ontology& ontology, Rng& rng);

}  // namespace dialshape
