#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "dialshape/error_channel.hpp"
#include "dialshape/ontology.hpp"
#include "dialshape/user_sim.hpp"

namespace dialshape {

/// Method-variable support: how the user is searching.
enum class Method { none = 0, byconstraints, byalternatives, finished };
inline constexpr int kNumMethods = 4;

/// Tracked distributions: per-constraint-slot goal (over values + a
/// trailing "none" bucket), method, and user discourse act. Every
/// distribution is non-negative and sums to one.
struct BeliefState {
  std::vector<Eigen::VectorXd> goal;  // one per constraint slot, size |values|+1
  Eigen::VectorXd method;             // kNumMethods
  Eigen::VectorXd discourse;          // kNumActTypes

  bool operator==(const BeliefState& other) const;
};

/// Simplified Bayesian tracker. Updates are pure functions: evidence with
/// confidence c blends a point mass on the hypothesis with the prior,
/// posterior = c * point + (1-c) * prior.
class BeliefTracker {
 public:
  explicit BeliefTracker(const Ontology& ontology);

  /// Uniform goal distributions, method point mass on none, uniform
  /// discourse. Deterministic.
  BeliefState init() const;

  /// One turn of evidence: the observed user act plus the system act it
  /// responded to (needed to resolve affirm/negate against the confirmed
  /// slot and value). Throws std::invalid_argument on dimension mismatch.
  BeliefState update(const BeliefState& belief, const Observation& obs,
                     const DecodedSystemAct& last_system_act) const;

  int goal_dim() const;  // sum of per-slot distribution sizes

 private:
  const Ontology* ontology_;
};

}  // namespace dialshape
