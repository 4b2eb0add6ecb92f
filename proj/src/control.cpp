#include "persimon/control.hpp"

#include <stdexcept>
#include <string>

namespace persimon {

void validate(const AgentParams& params, double length, const std::string& where) {
  if (params.theta.size() != params.dwell.size())
    throw ValidationError(where + ": theta0 and w0 must have the same length");
  for (Eigen::Index l = 0; l < params.theta.size(); ++l) {
    const double th = params.theta(l);
    if (!std::isfinite(th) || th < 0.0 || th > length)
      throw ValidationError(where + ".theta0[" + std::to_string(l) + "]: outside [0, L]");
    const double w = params.dwell(l);
    if (!std::isfinite(w) || w < 0.0)
      throw ValidationError(where + ".w0[" + std::to_string(l) + "]: must be >= 0");
  }
}

PhaseState start_phase(const AgentParams& params, double s0, int u0, bool* u0_conflict) {
  PhaseState phase;
  if (u0_conflict) *u0_conflict = false;
  if (params.size() == 0) {
    phase.mode = PhaseMode::Exhausted;
    phase.index = 0;
    phase.u = 0;
    if (u0_conflict && u0 != 0) *u0_conflict = true;
    return phase;
  }
  phase.mode = PhaseMode::Transit;
  phase.index = 1;
  phase.u = sgn(params.theta(0) - s0);
  if (u0_conflict && phase.u != u0) *u0_conflict = true;
  return phase;
}

int control_value(const PhaseState& phase) {
  return phase.mode == PhaseMode::Transit ? phase.u : 0;
}

namespace {

// Direction of the leg theta_l -> theta_{l+1}; 0 when there is no next point.
int leg_direction(const AgentParams& params, int l) {
  if (l >= params.size()) return 0;
  return sgn(params.theta(l) - params.theta(l - 1));
}

}  // namespace

std::optional<PhaseBoundary> next_phase_boundary(const PhaseState& phase, const AgentParams& params,
                                                 double s, double t, double horizon) {
  PhaseBoundary b;
  b.point = phase.index;
  switch (phase.mode) {
    case PhaseMode::Exhausted:
      return std::nullopt;
    case PhaseMode::Transit: {
      const double target = params.theta(phase.index - 1);
      b.kind = BoundaryKind::Arrival;
      b.time = t + std::abs(target - s);
      b.u_before = phase.u;
      if (params.dwell(phase.index - 1) > 0.0)
        b.u_after = 0;
      else
        b.u_after = leg_direction(params, phase.index);
      break;
    }
    case PhaseMode::Dwell: {
      b.time = phase.dwell_deadline;
      b.u_before = 0;
      if (phase.index >= params.size()) {
        b.kind = BoundaryKind::Exhaust;
        b.u_after = 0;
      } else {
        b.kind = BoundaryKind::Departure;
        b.u_after = leg_direction(params, phase.index);
      }
      break;
    }
  }
  if (b.time > horizon) return std::nullopt;
  return b;
}

PhaseState advance_phase(const PhaseState& phase, const PhaseBoundary& b, const AgentParams& params) {
  if (b.point != phase.index)
    throw std::logic_error("advance_phase: boundary for point " + std::to_string(b.point) +
                           " applied to phase at point " + std::to_string(phase.index));
  PhaseState next = phase;
  const auto gamma = static_cast<int>(params.size());
  switch (b.kind) {
    case BoundaryKind::Arrival: {
      if (phase.mode != PhaseMode::Transit)
        throw std::logic_error("advance_phase: arrival outside transit");
      const double w = params.dwell(phase.index - 1);
      if (w > 0.0) {
        next.mode = PhaseMode::Dwell;
        next.dwell_deadline = b.time + w;
        next.u = 0;
      } else if (phase.index >= gamma) {
        next.mode = PhaseMode::Exhausted;
        next.u = 0;
      } else {
        next.mode = PhaseMode::Transit;
        next.index = phase.index + 1;
        next.u = b.u_after;
      }
      break;
    }
    case BoundaryKind::Departure:
      if (phase.mode != PhaseMode::Dwell || phase.index >= gamma)
        throw std::logic_error("advance_phase: departure without a dwell and a next point");
      next.mode = PhaseMode::Transit;
      next.index = phase.index + 1;
      next.u = b.u_after;
      break;
    case BoundaryKind::Exhaust:
      if (phase.mode != PhaseMode::Dwell)
        throw std::logic_error("advance_phase: exhaust outside dwell");
      next.mode = PhaseMode::Exhausted;
      next.u = 0;
      break;
  }
  return next;
}

AgentParams project_params(AgentParams params, double length) {
  params.theta = params.theta.cwiseMax(0.0).cwiseMin(length);
  params.dwell = params.dwell.cwiseMax(0.0);
  return params;
}

}  // namespace persimon
