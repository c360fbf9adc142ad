#include "dialshape/features.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dialshape {

FeatureLayout::FeatureLayout(const Ontology& ontology) {
  int offset = 0;
  auto add = [&](const std::string& name, int width) {
    segments_.push_back({name, offset, width});
    offset += width;
  };

  for (const auto& slot : ontology.constraint_slots) {
    const int w = static_cast<int>(slot.values.size()) + 1;
    goal_widths_.push_back(w);
    add("goal_" + slot.name, w);
  }
  add("method", kNumMethods);
  add("discourse", kNumActTypes);
  add("user_act", kNumActTypes);
  n_actions_ = SystemActionSpace(ontology).size();
  add("system_act", n_actions_);
  add("turn_fraction", 1);
  dim_ = offset;
}

void FeatureLayout::fill_belief(const BeliefState& belief,
                                Eigen::VectorXd& out) const {
  if (belief.goal.size() != goal_widths_.size()) {
    throw std::invalid_argument("belief does not match feature layout");
  }
  int offset = 0;
  for (size_t i = 0; i < goal_widths_.size(); ++i) {
    if (belief.goal[i].size() != goal_widths_[i]) {
      throw std::invalid_argument("goal distribution width mismatch");
    }
    out.segment(offset, goal_widths_[i]) = belief.goal[i];
    offset += goal_widths_[i];
  }
  if (belief.method.size() != kNumMethods ||
      belief.discourse.size() != kNumActTypes) {
    throw std::invalid_argument("belief does not match feature layout");
  }
  out.segment(offset, kNumMethods) = belief.method;
  out.segment(offset + kNumMethods, kNumActTypes) = belief.discourse;
}

Eigen::VectorXd FeatureLayout::extract(const BeliefState& belief,
                                       const Observation& obs,
                                       SystemAction system_action,
                                       int turn_index, int max_turns) const {
  if (turn_index < 1 || turn_index > max_turns) {
    throw std::invalid_argument("turn index out of range");
  }
  if (!system_action.valid() || system_action.index >= n_actions_) {
    throw std::invalid_argument("invalid system action");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim_);
  fill_belief(belief, out);
  const int base = dim_ - 1 - n_actions_ - kNumActTypes;
  out[base + static_cast<int>(obs.observed_act.type)] = 1.0;
  out[dim_ - 1 - n_actions_ + system_action.index] = 1.0;
  out[dim_ - 1] = static_cast<double>(turn_index) / max_turns;
  return out;
}

Eigen::VectorXd FeatureLayout::decision_state(const BeliefState& belief,
                                              const Observation* last_obs,
                                              std::optional<SystemAction> last_action,
                                              int turn_index, int max_turns) const {
  if (turn_index < 1 || turn_index > max_turns) {
    throw std::invalid_argument("turn index out of range");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim_);
  fill_belief(belief, out);
  const int base = dim_ - 1 - n_actions_ - kNumActTypes;
  if (last_obs != nullptr) {
    out[base + static_cast<int>(last_obs->observed_act.type)] = 1.0;
  }
  if (last_action && last_action->valid()) {
    out[dim_ - 1 - n_actions_ + last_action->index] = 1.0;
  }
  out[dim_ - 1] = static_cast<double>(turn_index - 1) / max_turns;
  return out;
}

void FeatureLayout::save_schema(const std::string& path) const {
  nlohmann::json j;
  j["dim"] = dim_;
  j["segments"] = nlohmann::json::array();
  for (const auto& seg : segments_) {
    j["segments"].push_back(
        {{"name", seg.name}, {"offset", seg.offset}, {"width", seg.width}});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write schema file: " + path);
  out << j.dump(2) << "\n";
}

int feature_dim(const Ontology& ontology) {
  return FeatureLayout(ontology).dim();
}

}  // namespace dialshape
