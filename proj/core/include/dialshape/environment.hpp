#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "dialshape/error_channel.hpp"
#include "dialshape/goal.hpp"
#include "dialshape/ontology.hpp"
#include "dialshape/user_sim.hpp"

namespace dialshape {

struct EnvConfig {
  double ser = 0.15;
  GoalSamplerConfig goal_sampler;
};

struct StepResult {
  DecodedSystemAct system_act;  // what the system's summary action decoded to
  Observation observation;
  double reward = 0.0;
  bool done = false;
};

/// True-goal progress view for the heuristic shaping potential.
/// Simulation-only: requires access to the sampled user goal.
struct GoalProgress {
  int constraints_grounded = 0;
  int constraints_total = 0;
  int requests_informed = 0;
  int requests_total = 0;
  bool none_correctly_asserted = false;
};

/// Simulated slot-filling dialogue environment: decodes summary actions
/// against the
/// venue database, runs the agenda user, passes the true user act through
/// the semantic error channel, and pays -1 per turn plus a +20 completion
/// bonus on the terminal turn.
///
/// A turn is one system action plus one user response. Termination: true
/// user bye, system bye, or the ontology turn cap. Everything stochastic
/// is drawn from one stream seeded at reset, so episodes are
/// bit-reproducible given (ontology, seed, ser, policy).
class DialogueEnv {
 public:
  DialogueEnv(const Ontology& ontology, EnvConfig cfg);

  const Ontology& ontology() const { return *ontology_; }
  const SystemActionSpace& action_space() const { return space_; }
  const EnvConfig& config() const { return cfg_; }

  /// Starts a new episode with a freshly sampled goal.
  void reset(std::uint64_t episode_seed);
  /// Starts a new episode with the given goal.
  void reset(std::uint64_t episode_seed, UserGoal goal);

  /// Advances one turn. Throws std::logic_error if the episode is done.
  StepResult step(SystemAction action);

  bool done() const { return done_; }
  int turn_count() const { return turn_count_; }
  const UserGoal& goal() const { return user_->goal(); }

  /// Task-completion predicate on the episode so far: a goal-consistent
  /// venue was offered and every requested slot informed for it, or the
  /// goal is unsatisfiable and the system asserted that no venue exists.
  bool objective_success() const;

  GoalProgress progress() const;

 private:
  void reset_state(UserGoal goal);
  DecodedSystemAct decode(SystemAction action);
  void apply_system_effects(const DecodedSystemAct& act);
  void absorb_observation(const Observation& obs, const DecodedSystemAct& system_act);
  bool venue_consistent_with_goal(int venue) const;

  const Ontology* ontology_;
  SystemActionSpace space_;
  EnvConfig cfg_;
  Rng rng_{0};

  std::unique_ptr<UserSimulator> user_;
  bool done_ = true;
  int turn_count_ = 0;

  // System-side dialogue state, built from observations only.
  std::map<std::string, std::string> heard_constraints_;
  int current_offer_ = -1;
  bool none_asserted_ = false;
  std::set<int> offered_venues_;
  std::map<int, std::set<std::string>> informed_requests_;  // per venue
};

}  // namespace dialshape
