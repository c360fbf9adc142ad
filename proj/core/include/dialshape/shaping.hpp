#pragma once

#include <string>
#include <vector>

#include "dialshape/environment.hpp"

namespace dialshape {

enum class PotentialSource { none, rnn, oracle_heuristic };

const std::string& potential_source_name(PotentialSource s);
PotentialSource potential_source_from_name(const std::string& name);

struct ShapingConfig {
  double gamma = 1.0;  // in (0, 1]
  PotentialSource source = PotentialSource::none;
  /// Replace the post-state potential with 0 on terminal transitions. With
  /// gamma = 1 this is required for the policy-invariance guarantee.
  bool terminal_potential_zero = true;
};

struct ShapedTransition {
  double env_reward = 0.0;
  double shaping_reward = 0.0;  // F
  double composite = 0.0;       // env_reward + F exactly
};

/// Potential-difference shaping term F = gamma * phi_next - phi_t. On a
/// terminal transition with terminal zeroing enabled, phi_next is forced
/// to 0 before applying the formula. Throws on non-finite potentials.
double shape(double phi_t, double phi_next, double gamma, bool is_terminal,
             const ShapingConfig& cfg);

/// Per-turn composite rewards for a whole episode. potentials[t] is the
/// potential after turn t+1; the pre-episode potential defaults to 0 (a
/// constant initial potential shifts all returns equally). The last
/// transition is terminal. Throws std::invalid_argument on length mismatch.
std::vector<ShapedTransition> shaped_stream(const std::vector<double>& potentials,
                                            const std::vector<double>& env_rewards,
                                            double gamma, const ShapingConfig& cfg,
                                            double initial_potential = 0.0);

/// Simulation-only heuristic potential: 20 * (fraction of goal constraints
/// correctly grounded + fraction of requested slots informed) / 2. Requires
/// the true goal, so it exists only as a simulated-user reference point.
double oracle_heuristic_potential(const GoalProgress& progress);

}  // namespace dialshape
