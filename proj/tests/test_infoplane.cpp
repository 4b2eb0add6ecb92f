#include <algorithm>

#include "doctest.h"
#include "persimon/infoplane.hpp"
#include "support.hpp"

using namespace persimon;

namespace {

Scenario line_scenario() {
  Scenario sc;
  sc.length = 40;
  sc.horizon = 10;
  sc.comm_range = 6;
  sc.targets = {{10, 1, 5, 1}, {30, 1, 5, 1}};
  sc.agents = {{8, 0, 3}, {12, 0, 3}, {30, 0, 3}};
  return sc;
}

Eigen::VectorXd positions(std::initializer_list<double> s) {
  return Eigen::Map<const Eigen::VectorXd>(s.begin(), static_cast<Eigen::Index>(s.size()));
}

bool has(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

TEST_CASE("neighborhoods use inclusive distance thresholds") {
  const Scenario sc = line_scenario();
  SUBCASE("agents within communication range") {
    const NeighborSnapshot n = neighborhoods(positions({8, 13, 30}), sc, 0);
    CHECK(has(n.agents_near[0], 1));
    CHECK(has(n.agents_near[1], 0));
    CHECK_FALSE(has(n.agents_near[0], 2));
    const NeighborSnapshot exact = neighborhoods(positions({8, 14, 30}), sc, 0);
    CHECK(has(exact.agents_near[0], 1));
  }
  SUBCASE("target at the sensing boundary is a neighbor") {
    const NeighborSnapshot n = neighborhoods(positions({7, 20, 30}), sc, 0);
    CHECK(has(n.targets_near[0], 0));
    CHECK(n.in_target_set(0, 0));
  }
  SUBCASE("shared target makes collaborators") {
    const NeighborSnapshot n = neighborhoods(positions({8, 12, 30}), sc, 0);
    CHECK(n.target_agents[0] == std::vector<int>{0, 1});
    CHECK(n.collaborators[0][0] == std::vector<int>{1});
    CHECK(n.collaborators[0][1] == std::vector<int>{0});
    CHECK(n.collaborators[1][2].empty());
  }
}

TEST_CASE("collaborators are always within communication range") {
  for (unsigned seed = 1; seed <= 40; ++seed) {
    const auto c = testing::random_case(seed, 4, 6, 10, 2);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0, c.scenario.length);
    Eigen::VectorXd s(4);
    for (int j = 0; j < 4; ++j) s(j) = u(rng);
    const NeighborSnapshot n = neighborhoods(s, c.scenario, 0);
    for (std::size_t j = 0; j < 4; ++j)
      for (int i : n.targets_near[j])
        for (int k : n.collaborators[static_cast<std::size_t>(i)][j]) CHECK(has(n.agents_near[j], k));
  }
}

TEST_CASE("visibility per information mode") {
  const Scenario sc = line_scenario();
  const NeighborSnapshot n = neighborhoods(positions({8, 12, 30}), sc, 0);
  const EventRecord far_depletion{1.0, EventKind::RhoZero, kNoIndex, 1, kNoIndex};
  const EventRecord far_release{1.0, EventKind::RhoPlus, kNoIndex, 1, kNoIndex};
  CHECK(classify({InfoMode::Centralized}, 0, far_depletion, n) == Visibility::Global);
  CHECK(classify({InfoMode::Almost}, 0, far_depletion, n) == Visibility::Broadcast);
  CHECK(classify({InfoMode::Local}, 0, far_depletion, n) == Visibility::Hidden);
  CHECK(classify({InfoMode::Almost}, 0, far_release, n) == Visibility::Hidden);
  CHECK(classify({InfoMode::Local}, 2, far_depletion, n) == Visibility::LocalTarget);

  const EventRecord own{1.0, EventKind::NuPlusZero, 0, kNoIndex, 1};
  const EventRecord partner{1.0, EventKind::NuPlusZero, 1, kNoIndex, 1};
  const EventRecord stranger{1.0, EventKind::NuPlusZero, 2, kNoIndex, 1};
  CHECK(classify({InfoMode::Local}, 0, own, n) == Visibility::Own);
  CHECK(classify({InfoMode::Local}, 0, partner, n) == Visibility::Collaborator);
  CHECK(classify({InfoMode::Local}, 0, stranger, n) == Visibility::Hidden);
  CHECK(classify({InfoMode::Centralized}, 0, stranger, n) == Visibility::Global);
}

TEST_CASE("event streams are nested across modes") {
  for (unsigned seed = 1; seed <= 10; ++seed) {
    const auto c = testing::random_case(seed, 3, 5, 40, 6);
    const SimRecord rec = simulate(c.scenario, c.params);
    const auto snaps = event_snapshots(c.scenario, rec);
    REQUIRE(snaps.size() == rec.events.size());
    for (int j = 0; j < 3; ++j) {
      const auto local = filtered_event_log({InfoMode::Local}, j, rec, snaps);
      const auto almost = filtered_event_log({InfoMode::Almost}, j, rec, snaps);
      const auto central = filtered_event_log({InfoMode::Centralized}, j, rec, snaps);
      for (std::size_t e = 0; e < rec.events.size(); ++e) {
        if (local[e].visibility != Visibility::Hidden) CHECK(almost[e].visibility != Visibility::Hidden);
        if (almost[e].visibility != Visibility::Hidden) CHECK(central[e].visibility != Visibility::Hidden);
      }
      CHECK(visible_events({InfoMode::Centralized}, j, rec, snaps) == rec.events);
    }
  }
}

TEST_CASE("almost decentralized gradients equal the centralized ones exactly") {
  for (unsigned seed = 1; seed <= 20; ++seed) {
    const auto c = testing::random_case(seed, 1 + seed % 4, 2 + seed % 7, 60, 8);
    const SimRecord rec = simulate(c.scenario, c.params);
    const GradientVector central = decentralized_gradient(c.scenario, c.params, rec, InfoMode::Centralized);
    const GradientVector almost = decentralized_gradient(c.scenario, c.params, rec, InfoMode::Almost);
    CAPTURE(seed);
    CHECK(central == almost);
    CHECK(central == ipa_gradient(c.scenario, c.params, rec));
  }
}

TEST_CASE("a single agent sees everything in every mode") {
  const auto c = testing::random_case(4, 1, 5, 60, 8);
  const SimRecord rec = simulate(c.scenario, c.params);
  const GradientVector central = decentralized_gradient(c.scenario, c.params, rec, InfoMode::Centralized);
  Scenario no_reset = c.scenario;
  no_reset.local_reentry_reset = false;
  CHECK(decentralized_gradient(c.scenario, c.params, rec, InfoMode::Local) == central);
  CHECK(decentralized_gradient(no_reset, c.params, rec, InfoMode::Local) == central);
}

TEST_CASE("local gradients diverge once a non-local depletion occurs") {
  const auto c = testing::random_case(1, 3, 6, 60, 8, 30.0);
  const SimRecord rec = simulate(c.scenario, c.params);
  const std::vector<NeighborSnapshot> snaps = event_snapshots(c.scenario, rec);
  bool non_local = false;
  for (std::size_t e = 0; e < rec.events.size(); ++e)
    if (rec.events[e].kind == EventKind::RhoZero)
      for (int j = 0; j < 3; ++j) non_local = non_local || !snaps[e].in_target_set(j, rec.events[e].target);
  REQUIRE(non_local);
  const GradientVector almost = decentralized_gradient(c.scenario, c.params, rec, InfoMode::Almost);
  const GradientVector local = decentralized_gradient(c.scenario, c.params, rec, InfoMode::Local);
  CHECK_FALSE(almost == local);
}

TEST_CASE("hold and reset of out-of-range derivatives") {
  for (unsigned seed = 1; seed <= 20; ++seed) {
    const auto c = testing::random_case(seed, 1 + seed % 4, 2 + seed % 7, 60, 8);
    const HoldResetAudit audit = audit_hold_reset(c.scenario, c.params, simulate(c.scenario, c.params));
    CAPTURE(seed);
    CHECK(audit.violations == 0);
    CHECK(audit.intervals_checked > 0);
  }
}

TEST_CASE("every depletion is observed by some agent") {
  for (unsigned seed = 1; seed <= 20; ++seed) {
    const auto c = testing::random_case(seed, 3, 6, 60, 8);
    CHECK(unobserved_depletions(c.scenario, simulate(c.scenario, c.params)) == 0);
  }
}
