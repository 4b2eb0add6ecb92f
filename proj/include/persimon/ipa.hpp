#pragma once

// Infinitesimal perturbation analysis of the mission cost with respect to
// every agent's switching points and dwell times.
//
// The derivative state is event-driven: ds_j/d(theta_j, w_j) only jumps at
// agent j's control switches, dR_i/d(theta_j, w_j) is reset by uncertainty
// depletion events and otherwise moves by a closed-form amount per interval.

#include <vector>

#include <Eigen/Core>

#include "persimon/control.hpp"
#include "persimon/events.hpp"
#include "persimon/simulator.hpp"

namespace persimon {

/// Derivative state owned by (or replicated for) one agent j.
struct AgentIpa {
  int agent = 0;
  double s0 = 0.0;               // theta_{j0} for the first leg
  int xi = 0;                    // last switching point reached, 1-based; 0 before the first
  int u = 0;                     // control after the last processed switch
  Eigen::VectorXd ds_dtheta;     // ds_j/dtheta_j
  Eigen::VectorXd ds_dw;         // ds_j/dw_j
  Eigen::MatrixXd dr_dtheta;     // row i: dR_i/dtheta_j
  Eigen::MatrixXd dr_dw;         // row i: dR_i/dw_j
  Eigen::VectorXd int_dtheta;    // running integral of sum_i dR_i/dtheta_j
  Eigen::VectorXd int_dw;        // running integral of sum_i dR_i/dw_j
  double rho_plus_residual = 0;  // largest |dR_i| found at a rho+ reset (0 in exact arithmetic)
};

struct IpaState {
  std::vector<AgentIpa> agents;
};

/// dJ/dtheta_j and dJ/dw_j for one agent.
struct AgentGradient {
  Eigen::VectorXd theta;
  Eigen::VectorXd w;

  double norm() const { return std::sqrt(theta.squaredNorm() + w.squaredNorm()); }
  bool operator==(const AgentGradient&) const = default;
};

using GradientVector = std::vector<AgentGradient>;

AgentIpa ipa_init(const AgentParams& params, int agent, double s0, std::size_t num_targets);
IpaState ipa_init(const Scenario& scenario, const std::vector<AgentParams>& params);

/// Advance the derivative state across one inter-event interval and add its
/// contribution to the gradient integrals.
void ipa_interval_update(AgentIpa& block, const IntervalRecord& interval, const Scenario& scenario);
void ipa_interval_update(IpaState& state, const IntervalRecord& interval, const Scenario& scenario);

/// Boundary conditions at an event. `params` are the owning agent's parameters.
void ipa_event_update(AgentIpa& block, const EventRecord& event, const AgentParams& params);
void ipa_event_update(IpaState& state, const EventRecord& event, const std::vector<AgentParams>& params);

/// (1/T) times the accumulated integrals.
AgentGradient accumulate_gradient(const AgentIpa& block, double horizon);
GradientVector accumulate_gradient(const IpaState& state, double horizon);

/// Full-information gradient of J along `record` (every event applied).
GradientVector ipa_gradient(const Scenario& scenario, const std::vector<AgentParams>& params,
                            const SimRecord& record);

/// ds_j/dtheta_j and ds_j/dw_j written directly from the parameterization for an
/// agent that has just reached (or is holding at) switching point `xi` and now
/// moves with control `u`. Used for pass-through switches and as a cross-check
/// of the event recursion.
void closed_form_position_sensitivity(const AgentParams& params, double s0, int xi, int u,
                                      Eigen::VectorXd& ds_dtheta, Eigen::VectorXd& ds_dw);

}  // namespace persimon
