#pragma once

// Who knows what, and when. Neighborhoods are recomputed from agent positions
// at every event time; each agent's gradient replica is then driven only by
// the events its information mode entitles it to.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "persimon/control.hpp"
#include "persimon/events.hpp"
#include "persimon/ipa.hpp"
#include "persimon/model.hpp"
#include "persimon/simulator.hpp"

namespace persimon {

/// Neighborhoods at one instant. All membership tests are boundary inclusive.
struct NeighborSnapshot {
  double t = 0.0;
  std::vector<std::vector<int>> agents_near;    // A_j: k != j with |s_j - s_k| <= r_c
  std::vector<std::vector<int>> targets_near;   // T_j: i with |s_j - x_i| <= r_j
  std::vector<std::vector<int>> target_agents;  // B_i: j with |s_j - x_i| <= r_j
  // collaborators[i][j] = B_i \ {j}
  std::vector<std::vector<std::vector<int>>> collaborators;

  bool in_target_set(int j, int i) const;
};

NeighborSnapshot neighborhoods(const Eigen::VectorXd& positions, const Scenario& scenario, double t);

/// Why an event reached (or did not reach) an agent.
enum class Visibility : std::uint8_t {
  Own,           // agent event of j itself
  LocalTarget,   // target event for some i in T_j
  Collaborator,  // local event of a collaborator k in N_ij, i in T_j
  Broadcast,     // non-local rho0 relayed in ALMOST mode
  Global,        // anything else, seen only in CENTRALIZED mode
  Hidden,
};

std::string to_string(Visibility v);

struct VisibilityPolicy {
  InfoMode mode = InfoMode::Centralized;
};

/// Classify `event` for agent j against the neighborhoods at the event time.
Visibility classify(const VisibilityPolicy& policy, int j, const EventRecord& event,
                    const NeighborSnapshot& snapshot);

/// One snapshot per logged event, taken from the agent positions at its time.
std::vector<NeighborSnapshot> event_snapshots(const Scenario& scenario, const SimRecord& record);

struct FilteredEvent {
  EventRecord event;
  Visibility visibility = Visibility::Hidden;
};

/// Every logged event tagged with its visibility for agent j (hidden ones included).
std::vector<FilteredEvent> filtered_event_log(const VisibilityPolicy& policy, int j, const SimRecord& record,
                                              const std::vector<NeighborSnapshot>& snapshots);

/// The events agent j actually receives, in log order.
std::vector<EventRecord> visible_events(const VisibilityPolicy& policy, int j, const SimRecord& record,
                                        const std::vector<NeighborSnapshot>& snapshots);

/// Per-agent gradients, each from a replica fed only its visible events.
GradientVector decentralized_gradient(const Scenario& scenario, const std::vector<AgentParams>& params,
                                      const SimRecord& record, InfoMode mode);

/// Violations of the hold/reset behaviour of dR_i/d(theta_j, w_j) while i is out
/// of agent j's range, checked on the full-information derivative state.
struct HoldResetAudit {
  long intervals_checked = 0;
  long events_checked = 0;
  long violations = 0;
  std::vector<std::string> messages;  // first few violations
};

HoldResetAudit audit_hold_reset(const Scenario& scenario, const std::vector<AgentParams>& params,
                                const SimRecord& record);

/// Number of rho0 events with no agent in range of the target at the event time.
int unobserved_depletions(const Scenario& scenario, const SimRecord& record);

}  // namespace persimon
