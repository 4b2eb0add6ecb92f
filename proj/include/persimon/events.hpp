#pragma once

#include <cstdint>
#include <string>

namespace persimon {

/// Hybrid-system events. The first twelve follow the agent/target event
/// taxonomy; the rest are bookkeeping kinds the simulator also logs.
enum class EventKind : std::uint8_t {
  RhoZero,       // R_i hits 0                            (type I)
  RhoPlus,       // R_i leaves 0                          (type I)
  PiZero,        // p_ij hits 0                           (type II)
  PiPlus,        // p_ij leaves 0                         (type II)
  NuPlusZero,    // u_j: 1 -> 0                           (type III)
  NuMinusZero,   // u_j: -1 -> 0
  NuZeroPlus,    // u_j: 0 -> 1
  NuZeroMinus,   // u_j: 0 -> -1
  NuPlusMinus,   // u_j: 1 -> -1
  NuMinusPlus,   // u_j: -1 -> 1
  DeltaPlus,     // agent k joins N_ij                    (type IV)
  DeltaMinus,    // agent k leaves N_ij
  NuPass,        // switching point reached without a control change
  Cross,         // s_j passes x_i inside the sensing range
  Horizon,       // t = T
};

enum class EventType : std::uint8_t { I = 1, II = 2, III = 3, IV = 4, Plumbing = 5 };

EventType event_type(EventKind kind);
bool is_control_event(EventKind kind);
std::string to_string(EventKind kind);
/// Inverse of to_string; throws std::invalid_argument on unknown names.
EventKind event_kind_from_string(const std::string& name);

/// Control-switch kind for a u_before -> u_after change at a switching point.
EventKind control_event_kind(int u_before, int u_after);

inline constexpr int kNoIndex = -1;

struct EventRecord {
  double time = 0.0;
  EventKind kind = EventKind::Horizon;
  int agent = kNoIndex;   // j
  int target = kNoIndex;  // i
  int payload = kNoIndex; // joining/leaving agent k for Delta events; switching point l for control events

  bool operator==(const EventRecord&) const = default;
};

/// Position in the simultaneous-event processing order: type I, II, IV, III,
/// bookkeeping; then ascending target index, then ascending agent index.
int tie_break_rank(EventKind kind);
bool event_order(const EventRecord& a, const EventRecord& b);

inline constexpr int kNumEventKinds = static_cast<int>(EventKind::Horizon) + 1;

}  // namespace persimon
