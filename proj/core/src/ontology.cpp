#include "dialshape/ontology.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dialshape {

int Ontology::constraint_slot_index(const std::string& name) const {
  for (size_t i = 0; i < constraint_slots.size(); ++i) {
    if (constraint_slots[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

int Ontology::request_slot_index(const std::string& name) const {
  for (size_t i = 0; i < request_slots.size(); ++i) {
    if (request_slots[i] == name) return static_cast<int>(i);
  }
  return -1;
}

const ConstraintSlot& Ontology::constraint_slot(const std::string& name) const {
  const int idx = constraint_slot_index(name);
  if (idx < 0) throw std::invalid_argument("unknown constraint slot: " + name);
  return constraint_slots[idx];
}

bool Ontology::is_constraint_value(const std::string& slot,
                                   const std::string& value) const {
  const int idx = constraint_slot_index(slot);
  if (idx < 0) return false;
  for (const auto& v : constraint_slots[idx].values) {
    if (v == value) return true;
  }
  return false;
}

void Ontology::validate() const {
  if (constraint_slots.empty()) {
    throw std::invalid_argument("ontology has no constraint slots");
  }
  if (max_turns < 1) throw std::invalid_argument("max_turns must be >= 1");
  for (const auto& slot : constraint_slots) {
    if (slot.name.empty()) throw std::invalid_argument("unnamed constraint slot");
    if (slot.values.empty()) {
      throw std::invalid_argument("constraint slot has no values: " + slot.name);
    }
    for (const auto& v : slot.values) {
      if (v.empty() || v == kDontCare) {
        throw std::invalid_argument("bad value in slot " + slot.name);
      }
    }
  }
  for (const auto& venue : venues) {
    if (venue.name.empty()) throw std::invalid_argument("unnamed venue");
    for (const auto& slot : constraint_slots) {
      const auto it = venue.attributes.find(slot.name);
      if (it == venue.attributes.end()) {
        throw std::invalid_argument("venue " + venue.name + " missing slot " +
                                    slot.name);
      }
      if (!is_constraint_value(slot.name, it->second)) {
        throw std::invalid_argument("venue " + venue.name + " has value '" +
                                    it->second + "' outside slot " + slot.name);
      }
    }
    for (const auto& req : request_slots) {
      if (venue.attributes.find(req) == venue.attributes.end()) {
        throw std::invalid_argument("venue " + venue.name +
                                    " missing request slot " + req);
      }
    }
  }
}

std::vector<int> Ontology::matching_venues(
    const std::map<std::string, std::string>& constraints) const {
  std::vector<int> out;
  for (size_t i = 0; i < venues.size(); ++i) {
    bool ok = true;
    for (const auto& [slot, value] : constraints) {
      if (value == kDontCare) continue;
      const auto it = venues[i].attributes.find(slot);
      if (it == venues[i].attributes.end() || it->second != value) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(static_cast<int>(i));
  }
  return out;
}

Ontology default_ontology() {
  Ontology ont;
  ont.constraint_slots = {
      {"food",
       {"british", "chinese", "french", "indian", "italian", "japanese",
        "korean", "mexican", "thai", "turkish"}},
      {"area", {"centre", "east", "north", "south", "west"}},
      {"pricerange", {"cheap", "moderate", "expensive"}},
  };
  ont.request_slots = {"phone", "address", "postcode"};
  ont.max_turns = 30;

  // Deterministic venue table. Combination index c = (f*5 + a)*3 + p walks
  // all 150 (food, area, price) triples; a fixed stride pattern skips 22 of
  // them so some constraint sets have no venue.
  const auto& foods = ont.constraint_slots[0].values;
  const auto& areas = ont.constraint_slots[1].values;
  const auto& prices = ont.constraint_slots[2].values;
  int venue_id = 0;
  for (size_t f = 0; f < foods.size(); ++f) {
    for (size_t a = 0; a < areas.size(); ++a) {
      for (size_t p = 0; p < prices.size(); ++p) {
        const int c = static_cast<int>((f * areas.size() + a) * prices.size() + p);
        if (c % 7 == 3) continue;  // 21 of 150 combinations uncovered
        Venue v;
        v.name = "venue" + std::to_string(venue_id);
        v.attributes["food"] = foods[f];
        v.attributes["area"] = areas[a];
        v.attributes["pricerange"] = prices[p];
        v.attributes["phone"] = "555-" + std::to_string(1000 + c);
        v.attributes["address"] = std::to_string(1 + c) + " main street";
        v.attributes["postcode"] = "pc" + std::to_string(100 + c);
        ont.venues.push_back(std::move(v));
        ++venue_id;
      }
    }
  }
  ont.validate();
  return ont;
}

Ontology load_ontology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open ontology file: " + path);
  nlohmann::json j;
  in >> j;

  Ontology ont;
  for (const auto& slot : j.at("constraint_slots")) {
    ConstraintSlot cs;
    cs.name = slot.at("name").get<std::string>();
    cs.values = slot.at("values").get<std::vector<std::string>>();
    ont.constraint_slots.push_back(std::move(cs));
  }
  ont.request_slots = j.at("request_slots").get<std::vector<std::string>>();
  for (const auto& venue : j.at("venues")) {
    Venue v;
    v.name = venue.at("name").get<std::string>();
    v.attributes =
        venue.at("attributes").get<std::map<std::string, std::string>>();
    ont.venues.push_back(std::move(v));
  }
  ont.max_turns = j.value("max_turns", 30);
  ont.validate();
  return ont;
}

void save_ontology(const Ontology& ontology, const std::string& path) {
  nlohmann::json j;
  j["constraint_slots"] = nlohmann::json::array();
  for (const auto& slot : ontology.constraint_slots) {
    j["constraint_slots"].push_back({{"name", slot.name}, {"values", slot.values}});
  }
  j["request_slots"] = ontology.request_slots;
  j["venues"] = nlohmann::json::array();
  for (const auto& venue : ontology.venues) {
    j["venues"].push_back({{"name", venue.name}, {"attributes", venue.attributes}});
  }
  j["max_turns"] = ontology.max_turns;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write ontology file: " + path);
  out << j.dump(2) << "\n";
}

SystemActionSpace::SystemActionSpace(const Ontology& ontology) {
  for (const auto& slot : ontology.constraint_slots) {
    entries_.push_back({SystemActKind::request, slot.name});
  }
  for (const auto& slot : ontology.constraint_slots) {
    entries_.push_back({SystemActKind::confirm, slot.name});
  }
  for (const auto& slot : ontology.constraint_slots) {
    entries_.push_back({SystemActKind::select, slot.name});
  }
  entries_.push_back({SystemActKind::inform_offer, ""});
  for (const auto& slot : ontology.request_slots) {
    entries_.push_back({SystemActKind::inform_requested, slot});
  }
  entries_.push_back({SystemActKind::inform_alternative, ""});
  entries_.push_back({SystemActKind::inform_none, ""});
  entries_.push_back({SystemActKind::repeat, ""});
  entries_.push_back({SystemActKind::reqmore, ""});
  entries_.push_back({SystemActKind::restart, ""});
  entries_.push_back({SystemActKind::bye, ""});
  entries_.push_back({SystemActKind::hello, ""});
}

SystemAction SystemActionSpace::action(SystemActKind kind,
                                       const std::string& slot) const {
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].kind == kind && entries_[i].slot == slot) {
      return SystemAction{static_cast<int>(i)};
    }
  }
  throw std::invalid_argument("no such system action: " +
                              system_act_kind_name(kind) +
                              (slot.empty() ? "" : "(" + slot + ")"));
}

std::string SystemActionSpace::name(SystemAction a) const {
  const auto& e = entries_.at(a.index);
  if (e.slot.empty()) return system_act_kind_name(e.kind);
  return system_act_kind_name(e.kind) + "(" + e.slot + ")";
}

SystemAction SystemActionSpace::from_name(const std::string& name) const {
  for (size_t i = 0; i < entries_.size(); ++i) {
    const SystemAction a{static_cast<int>(i)};
    if (this->name(a) == name) return a;
  }
  throw std::invalid_argument("unknown system action name: " + name);
}

}  // namespace dialshape
