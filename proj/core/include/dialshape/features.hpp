#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "dialshape/belief.hpp"

namespace dialshape {

/// Per-turn feature layout over a fixed ontology:
///   [goal distributions | method | discourse | user-act one-hot |
///    system-act one-hot | turn fraction]
/// All entries lie in [0,1]; the one-hot segments contain exactly one 1.
class FeatureLayout {
 public:
  struct Segment {
    std::string name;
    int offset = 0;
    int width = 0;
  };

  explicit FeatureLayout(const Ontology& ontology);

  int dim() const { return dim_; }
  const std::vector<Segment>& segments() const { return segments_; }

  /// Feature vector for one completed exchange. turn_index is 1-based and
  /// must not exceed max_turns; the last entry is turn_index / max_turns.
  Eigen::VectorXd extract(const BeliefState& belief, const Observation& obs,
                          SystemAction system_action, int turn_index,
                          int max_turns) const;

  /// Decision-time variant used by the policy learner: same layout, but
  /// describing the state *before* a turn. The system segment is all zero
  /// on the first turn (no previous system act) and the trailing entry is
  /// (turn_index - 1) / max_turns.
  Eigen::VectorXd decision_state(const BeliefState& belief,
                                 const Observation* last_obs,
                                 std::optional<SystemAction> last_action,
                                 int turn_index, int max_turns) const;

  /// Writes the segment table (name, offset, width) as JSON so corpora are
  /// self-describing.
  void save_schema(const std::string& path) const;

 private:
  void fill_belief(const BeliefState& belief, Eigen::VectorXd& out) const;

  std::vector<Segment> segments_;
  std::vector<int> goal_widths_;
  int dim_ = 0;
  int n_actions_ = 0;
};

/// Feature dimensionality for an ontology; equals
/// FeatureLayout(ontology).dim().
int feature_dim(const Ontology& ontology);

}  // namespace dialshape
