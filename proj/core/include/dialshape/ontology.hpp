#pragma once

#include <map>
#include <string>
#include <vector>

#include "dialshape/acts.hpp"

namespace dialshape {

inline const std::string kDontCare = "dontcare";

struct ConstraintSlot {
  std::string name;
  std::vector<std::string> values;
};

/// A venue record: one value per constraint slot and per request slot.
struct Venue {
  std::string name;
  std::map<std::string, std::string> attributes;
};

/// Domain definition: searchable constraint slots, informable request
/// slots, the venue database, and the dialogue turn cap.
struct Ontology {
  std::vector<ConstraintSlot> constraint_slots;
  std::vector<std::string> request_slots;
  std::vector<Venue> venues;
  int max_turns = 30;

  int constraint_slot_index(const std::string& name) const;  // -1 if absent
  int request_slot_index(const std::string& name) const;     // -1 if absent
  const ConstraintSlot& constraint_slot(const std::string& name) const;
  bool is_constraint_value(const std::string& slot, const std::string& value) const;

  /// Throws std::invalid_argument when a structural invariant is violated
  /// (empty slots, venue missing a slot value, value outside the slot list,
  /// max_turns < 1).
  void validate() const;

  /// Venues matching a partial constraint assignment. A "dontcare" value
  /// matches everything.
  std::vector<int> matching_venues(const std::map<std::string, std::string>& constraints) const;
};

/// The built-in desk-scale domain: venues over food(10) x area(5) x
/// pricerange(3), request slots phone/address/postcode, 30-turn cap.
/// 129 of the 150 constraint combinations are covered by exactly one
/// venue, so a constrained search can come up empty.
Ontology default_ontology();

Ontology load_ontology(const std::string& path);
void save_ontology(const Ontology& ontology, const std::string& path);

/// The 20-way summary action set derived from an ontology with three
/// constraint slots and three request slots.
class SystemActionSpace {
 public:
  explicit SystemActionSpace(const Ontology& ontology);

  int size() const { return static_cast<int>(entries_.size()); }

  SystemActKind kind(SystemAction a) const { return entries_.at(a.index).kind; }
  /// Slot name for per-slot kinds, empty otherwise.
  const std::string& slot(SystemAction a) const { return entries_.at(a.index).slot; }

  SystemAction action(SystemActKind kind, const std::string& slot = "") const;

  /// Canonical name, e.g. "request(food)" or "inform_offer".
  std::string name(SystemAction a) const;
  SystemAction from_name(const std::string& name) const;

 private:
  struct Entry {
    SystemActKind kind;
    std::string slot;
  };
  std::vector<Entry> entries_;
};

}  // namespace dialshape
