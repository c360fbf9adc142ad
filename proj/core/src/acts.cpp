#include "dialshape/acts.hpp"

#include <array>
#include <stdexcept>

namespace dialshape {

namespace {

const std::array<std::string, kNumActTypes> kActTypeNames = {
    "hello", "inform", "request", "confirm", "affirm",
    "negate", "reqalts", "bye",    "null",
};

const std::array<std::string, 12> kSystemKindNames = {
    "request",          "confirm",      "select",
    "inform_offer",     "inform_requested", "inform_alternative",
    "inform_none",      "repeat",       "reqmore",
    "restart",          "bye",          "hello",
};

}  // namespace

const std::string& act_type_name(ActType t) {
  return kActTypeNames.at(static_cast<size_t>(t));
}

std::optional<ActType> act_type_from_name(const std::string& name) {
  for (size_t i = 0; i < kActTypeNames.size(); ++i) {
    if (name == kActTypeNames[i]) return static_cast<ActType>(i);
  }
  return std::nullopt;
}

const std::string& system_act_kind_name(SystemActKind k) {
  return kSystemKindNames.at(static_cast<size_t>(k));
}

std::string to_string(const DialogueAct& act) {
  std::string out = act_type_name(act.type);
  if (act.slot.empty()) return out;
  out += "(" + act.slot;
  if (!act.value.empty()) out += "=" + act.value;
  out += ")";
  return out;
}

DialogueAct parse_dialogue_act(const std::string& text) {
  const auto open = text.find('(');
  const std::string type_name =
      (open == std::string::npos) ? text : text.substr(0, open);
  const auto type = act_type_from_name(type_name);
  if (!type) throw std::invalid_argument("unknown act type: " + text);

  DialogueAct act;
  act.type = *type;
  if (open == std::string::npos) return act;
  if (text.back() != ')') throw std::invalid_argument("malformed act: " + text);

  const std::string inner = text.substr(open + 1, text.size() - open - 2);
  const auto eq = inner.find('=');
  if (eq == std::string::npos) {
    act.slot = inner;
  } else {
    act.slot = inner.substr(0, eq);
    act.value = inner.substr(eq + 1);
  }
  if (act.slot.empty()) throw std::invalid_argument("malformed act: " + text);
  return act;
}

}  // namespace dialshape
