#include "leadwalk/types.hpp"

namespace leadwalk {

const char* to_string(FormationSlot slot) {
  switch (slot) {
    case FormationSlot::FL: return "FL";
    case FormationSlot::FR: return "FR";
    case FormationSlot::BL: return "BL";
    case FormationSlot::BR: return "BR";
  }
  return "?";
}

const char* to_string(Condition condition) {
  switch (condition) {
    case Condition::heading: return "heading";
    case Condition::speed: return "speed";
    case Condition::control: return "control";
  }
  return "?";
}

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::heading: return "heading";
    case Mode::speed: return "speed";
  }
  return "?";
}

std::optional<FormationSlot> formation_slot_from_string(const std::string& s) {
  if (s == "FL") return FormationSlot::FL;
  if (s == "FR") return FormationSlot::FR;
  if (s == "BL") return FormationSlot::BL;
  if (s == "BR") return FormationSlot::BR;
  return std::nullopt;
}

std::optional<Condition> condition_from_string(const std::string& s) {
  if (s == "heading") return Condition::heading;
  if (s == "speed") return Condition::speed;
  if (s == "control") return Condition::control;
  return std::nullopt;
}

std::optional<Mode> mode_from_string(const std::string& s) {
  if (s == "heading") return Mode::heading;
  if (s == "speed") return Mode::speed;
  return std::nullopt;
}

}  // namespace leadwalk
