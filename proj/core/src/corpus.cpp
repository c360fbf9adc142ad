#include "dialshape/corpus.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "dialshape/belief.hpp"
#include "dialshape/features.hpp"

namespace dialshape {

void save_corpus(const std::vector<Episode>& episodes, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write corpus file: " + path);
  for (const auto& ep : episodes) {
    nlohmann::json j;
    j["id"] = ep.id;
    j["ser"] = ep.ser;
    j["success"] = ep.success;
    j["return"] = ep.return_label;
    j["goal"] = {{"constraints", ep.goal.constraints},
                 {"requests", ep.goal.requests}};
    j["turns"] = nlohmann::json::array();
    for (const auto& turn : ep.turns) {
      j["turns"].push_back({{"sys_act", turn.system_act.action.index},
                            {"sys_kind", static_cast<int>(turn.system_act.kind)},
                            {"sys_slot", turn.system_act.slot},
                            {"sys_value", turn.system_act.value},
                            {"sys_venue", turn.system_act.venue},
                            {"sys_none", turn.system_act.offered_none},
                            {"obs_act", to_string(turn.observation.observed_act)},
                            {"confidence", turn.observation.confidence},
                            {"corrupted", turn.observation.is_corrupted},
                            {"reward", turn.reward}});
    }
    out << j.dump() << "\n";
  }
}

std::vector<Episode> load_corpus(const std::string& path, const Ontology& ontology) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);

  const BeliefTracker tracker(ontology);
  const FeatureLayout layout(ontology);
  const SystemActionSpace space(ontology);

  std::vector<Episode> episodes;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }

    Episode ep;
    ep.id = j.at("id").get<int>();
    ep.ser = j.at("ser").get<double>();
    ep.success = j.at("success").get<bool>();
    ep.return_label = j.at("return").get<double>();
    ep.goal.constraints =
        j.at("goal").at("constraints").get<std::map<std::string, std::string>>();
    ep.goal.requests = j.at("goal").at("requests").get<std::set<std::string>>();
    for (const auto& [slot, value] : ep.goal.constraints) {
      if (value != kDontCare && !ontology.is_constraint_value(slot, value)) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": unknown goal value " + slot + "=" + value);
      }
    }

    BeliefState belief = tracker.init();
    int turn_index = 0;
    for (const auto& tj : j.at("turns")) {
      ++turn_index;
      Turn turn;
      turn.system_act.action.index = tj.at("sys_act").get<int>();
      if (turn.system_act.action.index < 0 ||
          turn.system_act.action.index >= space.size()) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": unknown system action");
      }
      turn.system_act.kind = static_cast<SystemActKind>(tj.at("sys_kind").get<int>());
      turn.system_act.slot = tj.at("sys_slot").get<std::string>();
      turn.system_act.value = tj.at("sys_value").get<std::string>();
      turn.system_act.venue = tj.at("sys_venue").get<int>();
      turn.system_act.offered_none = tj.at("sys_none").get<bool>();
      turn.observation.observed_act =
          parse_dialogue_act(tj.at("obs_act").get<std::string>());
      turn.observation.confidence = tj.at("confidence").get<double>();
      turn.observation.is_corrupted = tj.at("corrupted").get<bool>();
      turn.reward = tj.at("reward").get<double>();

      const auto& act = turn.observation.observed_act;
      if (!act.slot.empty() && ontology.constraint_slot_index(act.slot) < 0 &&
          ontology.request_slot_index(act.slot) < 0) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": unknown slot " + act.slot);
      }
      if (act.type == ActType::inform && !act.value.empty() &&
          act.value != kDontCare &&
          ontology.constraint_slot_index(act.slot) >= 0 &&
          !ontology.is_constraint_value(act.slot, act.value)) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": unknown value " + act.slot + "=" + act.value);
      }

      belief = tracker.update(belief, turn.observation, turn.system_act);
      turn.belief_after = belief;
      turn.features = layout.extract(belief, turn.observation,
                                     turn.system_act.action, turn_index,
                                     ontology.max_turns);
      ep.turns.push_back(std::move(turn));
    }

    double reward_sum = 0.0;
    for (const auto& t : ep.turns) reward_sum += t.reward;
    if (std::abs(reward_sum - ep.return_label) > 1e-9) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": return label does not match turn rewards");
    }
    episodes.push_back(std::move(ep));
  }
  return episodes;
}

std::vector<ReturnSequence> to_return_sequences(const std::vector<Episode>& episodes) {
  std::vector<ReturnSequence> out;
  out.reserve(episodes.size());
  for (const auto& ep : episodes) {
    ReturnSequence seq;
    seq.return_label = ep.return_label;
    seq.features.reserve(ep.turns.size());
    for (const auto& turn : ep.turns) seq.features.push_back(turn.features);
    out.push_back(std::move(seq));
  }
  return out;
}

}  // namespace dialshape
