#include <algorithm>
#include <vector>

#include "doctest.h"
#include "persimon/events.hpp"

using namespace persimon;

TEST_CASE("event names round-trip") {
  for (int k = 0; k < kNumEventKinds; ++k) {
    const auto kind = static_cast<EventKind>(k);
    CHECK(event_kind_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS(event_kind_from_string("rho1"));
}

TEST_CASE("control switch kinds") {
  CHECK(control_event_kind(1, 0) == EventKind::NuPlusZero);
  CHECK(control_event_kind(-1, 0) == EventKind::NuMinusZero);
  CHECK(control_event_kind(0, 1) == EventKind::NuZeroPlus);
  CHECK(control_event_kind(0, -1) == EventKind::NuZeroMinus);
  CHECK(control_event_kind(1, -1) == EventKind::NuPlusMinus);
  CHECK(control_event_kind(-1, 1) == EventKind::NuMinusPlus);
  CHECK(control_event_kind(1, 1) == EventKind::NuPass);
  for (EventKind k : {EventKind::NuPlusZero, EventKind::NuMinusPlus, EventKind::NuPass})
    CHECK(is_control_event(k));
  CHECK_FALSE(is_control_event(EventKind::RhoZero));
}

TEST_CASE("event types") {
  CHECK(event_type(EventKind::RhoZero) == EventType::I);
  CHECK(event_type(EventKind::PiPlus) == EventType::II);
  CHECK(event_type(EventKind::NuZeroMinus) == EventType::III);
  CHECK(event_type(EventKind::DeltaMinus) == EventType::IV);
  CHECK(event_type(EventKind::Horizon) == EventType::Plumbing);
}

TEST_CASE("simultaneous events are ordered by type, then target, then agent") {
  std::vector<EventRecord> evs = {
      {1.0, EventKind::NuPlusZero, 0, kNoIndex, 1}, {1.0, EventKind::DeltaPlus, 1, 2, 0},
      {1.0, EventKind::PiPlus, 0, 2, kNoIndex},     {1.0, EventKind::RhoZero, kNoIndex, 3, kNoIndex},
      {1.0, EventKind::PiZero, 1, 0, kNoIndex},
  };
  std::stable_sort(evs.begin(), evs.end(), event_order);
  CHECK(evs[0].kind == EventKind::RhoZero);
  CHECK(evs[1].kind == EventKind::PiZero);
  CHECK(evs[2].kind == EventKind::PiPlus);
  CHECK(evs[3].kind == EventKind::DeltaPlus);
  CHECK(evs[4].kind == EventKind::NuPlusZero);
}
