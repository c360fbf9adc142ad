#include "dialshape/runner.hpp"

namespace dialshape {

Episode run_dialogue(DialogueEnv& env, const BeliefTracker& tracker,
                     const FeatureLayout& layout, DialoguePolicy& policy,
                     uint64_t episode_seed, int episode_id,
                     const std::optional<UserGoal>& fixed_goal) {
  if (fixed_goal) {
    env.reset(episode_seed, *fixed_goal);
  } else {
    env.reset(episode_seed);
  }
  policy.reset();

  Episode ep;
  ep.id = episode_id;
  ep.ser = env.config().ser;
  ep.goal = env.goal();

  BeliefState belief = tracker.init();
  const int max_turns = env.ontology().max_turns;
  PolicyContext ctx;
  ctx.max_turns = max_turns;

  Observation last_obs;
  DecodedSystemAct last_sys;
  while (!env.done()) {
    ctx.turn_index = env.turn_count() + 1;
    ctx.belief = &belief;
    ctx.last_observation = ep.turns.empty() ? nullptr : &last_obs;
    ctx.last_system_act = ep.turns.empty() ? nullptr : &last_sys;
    ctx.decision_state = nullptr;

    const SystemAction action = policy.act(ctx);
    const StepResult step = env.step(action);

    Turn turn;
    turn.system_act = step.system_act;
    turn.observation = step.observation;
    belief = tracker.update(belief, step.observation, step.system_act);
    turn.belief_after = belief;
    turn.features = layout.extract(belief, step.observation, action,
                                   env.turn_count(), max_turns);
    turn.reward = step.reward;
    ep.turns.push_back(std::move(turn));

    last_obs = step.observation;
    last_sys = step.system_act;
    ep.return_label += step.reward;
  }
  ep.success = env.objective_success();
  return ep;
}

}  // namespace dialshape
