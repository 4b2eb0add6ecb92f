#include "persimon/optimizer.hpp"

#include <cmath>

#include "persimon/infoplane.hpp"

namespace persimon {

void validate(const OptimizerConfig& c) {
  if (!(c.a_theta > 0.0) || !std::isfinite(c.a_theta)) throw ValidationError("optimizer.a_theta: must be > 0");
  if (!(c.a_w > 0.0) || !std::isfinite(c.a_w)) throw ValidationError("optimizer.a_w: must be > 0");
  if (!(c.eta > 0.5 && c.eta <= 1.0)) throw ValidationError("optimizer.eta: must lie in (0.5, 1]");
  if (!(c.epsilon > 0.0)) throw ValidationError("optimizer.epsilon: must be > 0");
  if (c.max_iters < 0) throw ValidationError("optimizer.max_iters: must be >= 0");
}

std::string to_string(Termination reason) { return reason == Termination::Tol ? "TOL" : "MAX_ITERS"; }

double step_size(int l, double scale, double eta) { return scale / std::pow(static_cast<double>(l) + 1.0, eta); }

AgentParams gd_iterate(const AgentParams& params, const AgentGradient& g, double alpha_theta, double alpha_w,
                       double length) {
  if (!g.theta.allFinite() || !g.w.allFinite())
    throw SimulationError("non-finite gradient: |dJ/dtheta| = " + std::to_string(g.theta.norm()) +
                          ", |dJ/dw| = " + std::to_string(g.w.norm()));
  AgentParams next = params;
  next.theta -= alpha_theta * g.theta;
  next.dwell -= alpha_w * g.w;
  return project_params(next, length);
}

OptRun optimize(const Scenario& sc, const std::vector<AgentParams>& initial, const OptimizerConfig& config,
                const IterationHook& on_iteration) {
  validate(config);
  OptRun run;
  std::vector<AgentParams> params = initial;
  for (int l = 0;; ++l) {
    const SimRecord record = simulate(sc, params, SimOptions{.record_samples = false});
    Iterate it;
    it.index = l;
    it.cost = record.cost;
    it.params = params;
    it.gradient = decentralized_gradient(sc, params, record, config.mode);
    bool converged = true;
    for (const AgentGradient& g : it.gradient) {
      it.grad_norms.push_back(g.norm());
      if (!(g.norm() < config.epsilon)) converged = false;
    }
    run.iterates.push_back(it);
    if (on_iteration) on_iteration(run.iterates.back(), record);
    if (converged) {
      run.reason = Termination::Tol;
      break;
    }
    if (l == config.max_iters) {
      run.reason = Termination::MaxIters;
      break;
    }
    const double at = step_size(l, config.a_theta, config.eta);
    const double aw = step_size(l, config.a_w, config.eta);
    for (std::size_t j = 0; j < params.size(); ++j)
      params[j] = gd_iterate(params[j], it.gradient[j], at, aw, sc.length);
  }
  run.final_params = params;
  return run;
}

}  // namespace persimon
