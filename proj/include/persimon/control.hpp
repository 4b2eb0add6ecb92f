#pragma once

// Parametric trajectory policy: an agent visits switching points theta_1..theta_G
// at unit speed and holds u = 0 for w_l at each of them.

#include <optional>

#include <Eigen/Core>

#include "persimon/model.hpp"

namespace persimon {

struct AgentParams {
  Eigen::VectorXd theta;  // switching points, each in [0, L]
  Eigen::VectorXd dwell;  // dwell time paired with each switching point, >= 0

  Eigen::Index size() const { return theta.size(); }
  bool operator==(const AgentParams& other) const {
    return theta.size() == other.theta.size() && dwell.size() == other.dwell.size() &&
           theta == other.theta && dwell == other.dwell;
  }
};

/// Throws ValidationError if theta/dwell lengths differ or entries are out of bounds.
void validate(const AgentParams& params, double length, const std::string& where);

enum class PhaseMode { Transit, Dwell, Exhausted };

struct PhaseState {
  int index = 1;  // 1-based switching point being approached or held
  PhaseMode mode = PhaseMode::Exhausted;
  double dwell_deadline = 0.0;  // absolute time, valid in Dwell
  int u = 0;
};

enum class BoundaryKind {
  Arrival,    // reached theta_l while in transit
  Departure,  // dwell at theta_l ended, heading to theta_{l+1}
  Exhaust,    // dwell at the last point ended; agent holds for the rest of the run
};

/// Next control-switch instant for one agent.
struct PhaseBoundary {
  double time = 0.0;
  BoundaryKind kind = BoundaryKind::Arrival;
  int point = 1;  // index l of the switching point involved
  int u_before = 0;
  int u_after = 0;
};

/// Initial phase at t = 0. The direction toward theta_1 overrides u0; when the
/// two disagree `u0_conflict` is set.
PhaseState start_phase(const AgentParams& params, double s0, int u0, bool* u0_conflict = nullptr);

int control_value(const PhaseState& phase);

/// Earliest control switch at or after `t`, or nullopt when none occurs
/// before the horizon.
std::optional<PhaseBoundary> next_phase_boundary(const PhaseState& phase, const AgentParams& params,
                                                 double s, double t, double horizon);

/// Phase after `boundary` fires at its time. Throws std::logic_error if the
/// boundary does not belong to `phase`.
PhaseState advance_phase(const PhaseState& phase, const PhaseBoundary& boundary,
                         const AgentParams& params);

/// Clamp theta to [0, L] and dwell times to [0, inf).
AgentParams project_params(AgentParams params, double length);

}  // namespace persimon
