#pragma once

#include <cstdint>
#include <optional>

#include "dialshape/environment.hpp"
#include "dialshape/episode.hpp"
#include "dialshape/features.hpp"
#include "dialshape/policies.hpp"

namespace dialshape {

/// Runs one dialogue to completion and records per-turn beliefs, features,
/// and rewards. The environment is reset with `episode_seed` (or the given
/// goal) before the rollout.
Episode run_dialogue(DialogueEnv& env, const BeliefTracker& tracker,
                     const FeatureLayout& layout, DialoguePolicy& policy,
                     uint64_t episode_seed, int episode_id,
                     const std::optional<UserGoal>& fixed_goal = std::nullopt);

}  // namespace dialshape
