#include "persimon/ipa.hpp"

#include <cmath>
#include <stdexcept>

namespace persimon {

namespace {

// theta_{l} with theta_0 = s0 (1-based l).
double point(const AgentParams& params, double s0, int l) {
  return l == 0 ? s0 : params.theta(l - 1);
}

// sgn(theta_l - theta_{l-1})
int leg_sign(const AgentParams& params, double s0, int l) {
  return sgn(point(params, s0, l) - point(params, s0, l - 1));
}

// Coefficient of -u in ds/dtheta_l once the agent has left theta_xi, l < xi.
int interior_leg_coefficient(const AgentParams& params, double s0, int l) {
  return leg_sign(params, s0, l) - leg_sign(params, s0, l + 1);
}

}  // namespace

void closed_form_position_sensitivity(const AgentParams& params, double s0, int xi, int u,
                                      Eigen::VectorXd& ds_dtheta, Eigen::VectorXd& ds_dw) {
  const Eigen::Index gamma = params.size();
  ds_dtheta.setZero(gamma);
  ds_dw.setZero(gamma);
  if (xi == 0) return;
  ds_dtheta(xi - 1) = 1.0 - u * leg_sign(params, s0, xi);
  for (int l = 1; l < xi; ++l) ds_dtheta(l - 1) = -u * interior_leg_coefficient(params, s0, l);
  ds_dw.head(xi).setConstant(-u);
}

AgentIpa ipa_init(const AgentParams& params, int agent, double s0, std::size_t num_targets) {
  AgentIpa block;
  block.agent = agent;
  block.s0 = s0;
  const Eigen::Index gamma = params.size();
  const auto m = static_cast<Eigen::Index>(num_targets);
  block.ds_dtheta.setZero(gamma);
  block.ds_dw.setZero(gamma);
  block.dr_dtheta.setZero(m, gamma);
  block.dr_dw.setZero(m, gamma);
  block.int_dtheta.setZero(gamma);
  block.int_dw.setZero(gamma);
  if (gamma > 0) block.u = sgn(params.theta(0) - s0);
  return block;
}

IpaState ipa_init(const Scenario& scenario, const std::vector<AgentParams>& params) {
  IpaState state;
  for (std::size_t j = 0; j < params.size(); ++j)
    state.agents.push_back(ipa_init(params[j], static_cast<int>(j), scenario.agents.at(j).s0,
                                    scenario.targets.size()));
  return state;
}

void ipa_interval_update(AgentIpa& b, const IntervalRecord& iv, const Scenario& sc) {
  const double dt = iv.length();
  const Eigen::Index j = b.agent;
  for (Eigen::Index i = 0; i < b.dr_dtheta.rows(); ++i) {
    b.int_dtheta += dt * b.dr_dtheta.row(i).transpose();
    b.int_dw += dt * b.dr_dw.row(i).transpose();
    if (iv.branch[static_cast<std::size_t>(i)] == Branch::Boundary) continue;
    const double dp = iv.dp_ds(i, j);
    if (dp == 0.0) continue;
    const double c = sc.targets[static_cast<std::size_t>(i)].decay * dp;
    b.int_dtheta -= (c * iv.g_integral(i, j)) * b.ds_dtheta;
    b.int_dw -= (c * iv.g_integral(i, j)) * b.ds_dw;
    b.dr_dtheta.row(i) -= (c * iv.g_end(i, j)) * b.ds_dtheta.transpose();
    b.dr_dw.row(i) -= (c * iv.g_end(i, j)) * b.ds_dw.transpose();
  }
}

void ipa_interval_update(IpaState& state, const IntervalRecord& iv, const Scenario& sc) {
  for (AgentIpa& b : state.agents) ipa_interval_update(b, iv, sc);
}

void ipa_event_update(AgentIpa& b, const EventRecord& ev, const AgentParams& params) {
  switch (ev.kind) {
    case EventKind::RhoZero:
      b.dr_dtheta.row(ev.target).setZero();
      b.dr_dw.row(ev.target).setZero();
      return;
    case EventKind::RhoPlus: {
      const double residual = b.dr_dtheta.cols() == 0
                                  ? 0.0
                                  : std::max(b.dr_dtheta.row(ev.target).cwiseAbs().maxCoeff(),
                                             b.dr_dw.row(ev.target).cwiseAbs().maxCoeff());
      b.rho_plus_residual = std::max(b.rho_plus_residual, residual);
      b.dr_dtheta.row(ev.target).setZero();
      b.dr_dw.row(ev.target).setZero();
      return;
    }
    case EventKind::PiZero:
    case EventKind::PiPlus:
    case EventKind::DeltaPlus:
    case EventKind::DeltaMinus:
    case EventKind::Cross:
    case EventKind::Horizon:
      return;
    default:
      break;
  }
  if (!is_control_event(ev.kind))
    throw std::logic_error("ipa_event_update: unhandled event kind " + to_string(ev.kind));
  if (ev.agent != b.agent) return;

  const int xi = ev.payload;
  if (xi < 1 || xi > params.size())
    throw std::logic_error("ipa_event_update: switching point index out of range");
  const Eigen::Index k = xi - 1;
  switch (ev.kind) {
    case EventKind::NuPlusZero:
    case EventKind::NuMinusZero:
      // arrival, dwell starts
      b.xi = xi;
      b.u = 0;
      b.ds_dtheta.head(k).setZero();
      b.ds_dtheta(k) = 1.0;
      b.ds_dw.head(xi).setZero();
      break;
    case EventKind::NuZeroPlus:
    case EventKind::NuZeroMinus: {
      // departure after a dwell at theta_xi
      const int u = ev.kind == EventKind::NuZeroPlus ? 1 : -1;
      b.xi = xi;
      b.u = u;
      b.ds_dtheta(k) -= u * leg_sign(params, b.s0, xi);
      for (int l = 1; l < xi; ++l)
        b.ds_dtheta(l - 1) -= u * interior_leg_coefficient(params, b.s0, l);
      b.ds_dw.head(xi).setConstant(-u);
      break;
    }
    case EventKind::NuPlusMinus:
    case EventKind::NuMinusPlus: {
      // reversal at theta_xi without a dwell
      const int u = ev.kind == EventKind::NuMinusPlus ? 1 : -1;
      b.xi = xi;
      b.u = u;
      b.ds_dtheta.head(k) = -b.ds_dtheta.head(k);
      b.ds_dtheta(k) = 2.0;
      b.ds_dw.head(k) = -b.ds_dw.head(k);
      b.ds_dw(k) = -u;
      break;
    }
    case EventKind::NuPass:
      // control value unchanged (same-direction pass or zero-length leg)
      b.xi = xi;
      closed_form_position_sensitivity(params, b.s0, xi, b.u, b.ds_dtheta, b.ds_dw);
      break;
    default:
      break;
  }
}

void ipa_event_update(IpaState& state, const EventRecord& ev, const std::vector<AgentParams>& params) {
  for (AgentIpa& b : state.agents) ipa_event_update(b, ev, params.at(static_cast<std::size_t>(b.agent)));
}

AgentGradient accumulate_gradient(const AgentIpa& b, double horizon) {
  return {b.int_dtheta / horizon, b.int_dw / horizon};
}

GradientVector accumulate_gradient(const IpaState& state, double horizon) {
  GradientVector g;
  g.reserve(state.agents.size());
  for (const AgentIpa& b : state.agents) g.push_back(accumulate_gradient(b, horizon));
  return g;
}

GradientVector ipa_gradient(const Scenario& sc, const std::vector<AgentParams>& params,
                            const SimRecord& record) {
  IpaState state = ipa_init(sc, params);
  for (const IntervalRecord& iv : record.intervals) {
    for (std::size_t e = iv.event_begin; e < iv.event_end; ++e)
      ipa_event_update(state, record.events[e], params);
    ipa_interval_update(state, iv, sc);
  }
  return accumulate_gradient(state, record.horizon);
}

}  // namespace persimon
