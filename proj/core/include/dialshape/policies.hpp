#pragma once

#include <Eigen/Core>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "dialshape/belief.hpp"
#include "dialshape/environment.hpp"

namespace dialshape {

/// System-visible information available when choosing an action: the turn
/// about to happen, the tracked belief, and the previous exchange. The
/// decision_state vector matches the feature layout (zero system segment
/// on the first turn).
struct PolicyContext {
  int turn_index = 1;  // 1-based, the turn being decided
  int max_turns = 30;
  const BeliefState* belief = nullptr;
  const Observation* last_observation = nullptr;  // null on the first turn
  const DecodedSystemAct* last_system_act = nullptr;
  const Eigen::VectorXd* decision_state = nullptr;
};

class DialoguePolicy {
 public:
  virtual ~DialoguePolicy() = default;
  virtual void reset() {}
  virtual SystemAction act(const PolicyContext& ctx) = 0;
};

/// Handcrafted script: ground every constraint slot, offer, answer
/// requests, say bye when the user is done. Completes every satisfiable
/// task under a clean channel. Tracks its own grounding from observations
/// only.
class ScriptedPolicy : public DialoguePolicy {
 public:
  explicit ScriptedPolicy(const Ontology& ontology, const SystemActionSpace& space);
  void reset() override;
  SystemAction act(const PolicyContext& ctx) override;

 private:
  const Ontology* ontology_;
  const SystemActionSpace* space_;
  std::map<std::string, std::string> grounded_;
  std::string pending_request_;
  bool want_alternative_ = false;
  bool offer_made_ = false;
  int grounding_version_ = 0;
  int offered_version_ = -1;
};

class RandomPolicy : public DialoguePolicy {
 public:
  RandomPolicy(const SystemActionSpace& space, std::uint64_t seed);
  void reset() override {}
  SystemAction act(const PolicyContext& ctx) override;

 private:
  int n_actions_;
  Rng rng_;
};

/// Behavior policy for corpus generation: plays the scripted action with
/// probability mix, otherwise a uniform random action. Produces both
/// outcome classes at every error rate.
class MixturePolicy : public DialoguePolicy {
 public:
  MixturePolicy(const Ontology& ontology, const SystemActionSpace& space,
                double mix, std::uint64_t seed);
  void reset() override;
  SystemAction act(const PolicyContext& ctx) override;

 private:
  ScriptedPolicy scripted_;
  int n_actions_;
  double mix_;
  Rng rng_;
};

}  // namespace dialshape
