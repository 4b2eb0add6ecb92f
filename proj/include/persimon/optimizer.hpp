#pragma once

// Projected gradient descent over every agent's (theta, w) with diminishing
// steps a / (l + 1)^eta. Agents update synchronously once per iteration.

#include <functional>
#include <string>
#include <vector>

#include "persimon/control.hpp"
#include "persimon/ipa.hpp"
#include "persimon/model.hpp"
#include "persimon/simulator.hpp"

namespace persimon {

struct OptimizerConfig {
  double a_theta = 0.2;
  double a_w = 0.2;
  double eta = 0.6;
  double epsilon = 1e-3;  // stop once every agent's gradient norm is below this
  int max_iters = 200;    // n_0
  InfoMode mode = InfoMode::Almost;
};

void validate(const OptimizerConfig& config);

enum class Termination { Tol, MaxIters };
std::string to_string(Termination reason);

/// One simulate-and-differentiate pass. `cost` is evaluated at `params`,
/// before the update that `gradient` drives.
struct Iterate {
  int index = 0;
  double cost = 0.0;
  std::vector<AgentParams> params;
  GradientVector gradient;
  std::vector<double> grad_norms;
};

struct OptRun {
  std::vector<Iterate> iterates;  // at most max_iters + 1
  std::vector<AgentParams> final_params;
  Termination reason = Termination::MaxIters;

  double initial_cost() const { return iterates.front().cost; }
  double final_cost() const { return iterates.back().cost; }
};

double step_size(int l, double scale, double eta);

/// theta -= a_theta * dJ/dtheta, w -= a_w * dJ/dw, then projection onto the
/// feasible box. Throws SimulationError on a non-finite gradient.
AgentParams gd_iterate(const AgentParams& params, const AgentGradient& gradient, double alpha_theta,
                       double alpha_w, double length);

/// Called after each iterate is recorded, with the record that produced it.
using IterationHook = std::function<void(const Iterate&, const SimRecord&)>;

OptRun optimize(const Scenario& scenario, const std::vector<AgentParams>& initial,
                const OptimizerConfig& config, const IterationHook& on_iteration = {});

}  // namespace persimon
