#pragma once

#include <deque>
#include <map>
#include <set>
#include <string>

#include "dialshape/goal.hpp"
#include "dialshape/ontology.hpp"
#include "dialshape/rng.hpp"

namespace dialshape {

/// What the system actually uttered on its turn, as heard by the user.
/// Produced by the environment's action decoder.
struct DecodedSystemAct {
  SystemAction action;
  SystemActKind kind = SystemActKind::hello;
  std::string slot;   // request/confirm/select/inform_requested
  std::string value;  // confirmed or informed value
  int venue = -1;     // offered venue index (inform_offer/inform_alternative)
  bool offered_none = false;  // "no matching venue" assertion

  std::string describe(const SystemActionSpace& space, const Ontology& ontology) const;
};

/// Agenda-style simulated user. Holds a stack of pending acts seeded from
/// the goal constraints; specific system prompts (request/confirm/select)
/// override the stack, neutral prompts pop it.
class UserSimulator {
 public:
  UserSimulator(const Ontology& ontology, UserGoal goal);

  const UserGoal& goal() const { return goal_; }

  /// Next true user act in response to the system's turn. Throws
  /// std::logic_error once the user has said bye.
  DialogueAct respond(const DecodedSystemAct& system_act, Rng& rng);

  bool finished() const { return finished_; }

 private:
  DialogueAct answer_slot_query(const std::string& slot);
  DialogueAct next_from_agenda(Rng& rng);
  DialogueAct handle_offer(int venue_index, bool offered_none);
  bool offer_acceptable() const { return current_offer_ >= 0 && offer_consistent_; }
  bool all_requests_filled() const;
  DialogueAct finish();

  const Ontology* ontology_;
  UserGoal goal_;
  std::deque<DialogueAct> agenda_;      // pending informs / corrections
  int current_offer_ = -1;              // venue index as heard
  bool offer_consistent_ = false;
  bool heard_none_offer_ = false;
  std::set<std::string> filled_requests_;  // for the current offer
  bool finished_ = false;
};

}  // namespace dialshape
