#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace dialshape {

/// User dialogue act types. The fixed inventory doubles as the one-hot
/// feature segment and the discourse distribution support.
enum class ActType : std::uint8_t {
  hello = 0,
  inform,
  request,
  confirm,
  affirm,
  negate,
  reqalts,
  bye,
  null_act,
};

inline constexpr int kNumActTypes = 9;

const std::string& act_type_name(ActType t);
std::optional<ActType> act_type_from_name(const std::string& name);

/// A single user-side dialogue act. inform carries slot+value,
/// request/confirm carry a slot, everything else is bare.
struct DialogueAct {
  ActType type = ActType::null_act;
  std::string slot;
  std::string value;

  bool operator==(const DialogueAct&) const = default;

  static DialogueAct bare(ActType t) { return {t, "", ""}; }
  static DialogueAct inform(std::string slot, std::string value) {
    return {ActType::inform, std::move(slot), std::move(value)};
  }
  static DialogueAct request(std::string slot) {
    return {ActType::request, std::move(slot), ""};
  }
  static DialogueAct confirm(std::string slot, std::string value) {
    return {ActType::confirm, std::move(slot), std::move(value)};
  }
};

/// Canonical string form: "type", "type(slot)" or "type(slot=value)".
std::string to_string(const DialogueAct& act);
DialogueAct parse_dialogue_act(const std::string& text);

/// Summary system action kinds. Per-slot kinds are instantiated once per
/// constraint slot (request/confirm/select) or request slot
/// (inform_requested); the rest are global.
enum class SystemActKind : std::uint8_t {
  request = 0,
  confirm,
  select,
  inform_offer,
  inform_requested,
  inform_alternative,
  inform_none,
  repeat,
  reqmore,
  restart,
  bye,
  hello,
};

const std::string& system_act_kind_name(SystemActKind k);

/// A summary system action: an index into the fixed 20-way action set.
/// The index <-> (kind, slot position) mapping is a bijection fixed by
/// the ontology slot order; see SystemActionSpace.
struct SystemAction {
  int index = -1;

  bool valid() const { return index >= 0; }
  bool operator==(const SystemAction&) const = default;
};

}  // namespace dialshape
