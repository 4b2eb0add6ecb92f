#include "persimon/events.hpp"

#include <array>
#include <stdexcept>
#include <tuple>

namespace persimon {

namespace {

constexpr std::array<const char*, kNumEventKinds> kNames = {
    "rho0",    "rho+",    "pi0",     "pi+",     "nu(1,0)", "nu(-1,0)", "nu(0,1)", "nu(0,-1)",
    "nu(1,-1)", "nu(-1,1)", "delta+", "delta-", "nu_pass", "cross",    "horizon",
};

}  // namespace

EventType event_type(EventKind kind) {
  switch (kind) {
    case EventKind::RhoZero:
    case EventKind::RhoPlus: return EventType::I;
    case EventKind::PiZero:
    case EventKind::PiPlus: return EventType::II;
    case EventKind::NuPlusZero:
    case EventKind::NuMinusZero:
    case EventKind::NuZeroPlus:
    case EventKind::NuZeroMinus:
    case EventKind::NuPlusMinus:
    case EventKind::NuMinusPlus: return EventType::III;
    case EventKind::DeltaPlus:
    case EventKind::DeltaMinus: return EventType::IV;
    case EventKind::NuPass:
    case EventKind::Cross:
    case EventKind::Horizon: return EventType::Plumbing;
  }
  return EventType::Plumbing;
}

bool is_control_event(EventKind kind) {
  return event_type(kind) == EventType::III || kind == EventKind::NuPass;
}

std::string to_string(EventKind kind) { return kNames.at(static_cast<std::size_t>(kind)); }

EventKind event_kind_from_string(const std::string& name) {
  for (std::size_t k = 0; k < kNames.size(); ++k)
    if (name == kNames[k]) return static_cast<EventKind>(k);
  throw std::invalid_argument("unknown event kind '" + name + "'");
}

EventKind control_event_kind(int u_before, int u_after) {
  if (u_before == 1 && u_after == 0) return EventKind::NuPlusZero;
  if (u_before == -1 && u_after == 0) return EventKind::NuMinusZero;
  if (u_before == 0 && u_after == 1) return EventKind::NuZeroPlus;
  if (u_before == 0 && u_after == -1) return EventKind::NuZeroMinus;
  if (u_before == 1 && u_after == -1) return EventKind::NuPlusMinus;
  if (u_before == -1 && u_after == 1) return EventKind::NuMinusPlus;
  return EventKind::NuPass;
}

int tie_break_rank(EventKind kind) {
  switch (event_type(kind)) {
    case EventType::I: return 0;
    case EventType::II: return 1;
    case EventType::IV: return 2;
    case EventType::III: return 3;
    case EventType::Plumbing:
      // pass-through markers sit with the other control switches
      if (kind == EventKind::NuPass) return 3;
      if (kind == EventKind::Cross) return 1;
      return 4;
  }
  return 4;
}

bool event_order(const EventRecord& a, const EventRecord& b) {
  return std::make_tuple(tie_break_rank(a.kind), a.target, a.agent, static_cast<int>(a.kind), a.payload) <
         std::make_tuple(tie_break_rank(b.kind), b.target, b.agent, static_cast<int>(b.kind), b.payload);
}

}  // namespace persimon
