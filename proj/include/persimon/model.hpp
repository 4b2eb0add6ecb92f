#pragma once

// Domain types for the 1D persistent-monitoring mission and the pure
// sensing / uncertainty functions every other module builds on.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace persimon {

/// Raised for any malformed scenario or parameter set. Messages name the
/// offending field (e.g. "targets[3].B").
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when the simulation itself breaks an invariant (missed event,
/// negative uncertainty, non-finite gradient).
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InfoMode { Centralized, Almost, Local };

std::string to_string(InfoMode mode);
InfoMode info_mode_from_string(const std::string& name);

struct Target {
  double x = 0.0;       // position in [0, L]
  double growth = 1.0;  // A_i
  double decay = 5.0;   // B_i, must exceed A_i
  double r0 = 0.0;      // initial uncertainty
};

struct AgentSpec {
  double s0 = 0.0;
  int u0 = 0;
  double range = 1.0;  // sensing range r_j
};

struct Numerics {
  double step = 1e-3;        // bracketing grid for uncertainty guards
  double event_tol = 1e-9;   // event localization tolerance in time
  double sample_dt = 0.1;    // output sampling period
};

struct Scenario {
  double length = 0.0;   // L
  double horizon = 0.0;  // T
  std::vector<Target> targets;
  std::vector<AgentSpec> agents;
  double comm_range = 0.0;  // r_c
  InfoMode mode = InfoMode::Almost;
  Numerics numerics;
  // LOCAL mode only: zero a held derivative when a target re-enters the
  // sensing range with R_i = 0 observed.
  bool local_reentry_reset = true;

  std::size_t num_targets() const { return targets.size(); }
  std::size_t num_agents() const { return agents.size(); }
};

/// Throws ValidationError on the first violated invariant.
void validate(const Scenario& scenario);

/// Linear-decay detection probability p_j(x, s).
template <typename Scalar>
Scalar sensing_prob(Scalar x, Scalar s, Scalar range) {
  using std::abs;
  const Scalar p = Scalar(1) - abs(x - s) / range;
  return std::clamp(p, Scalar(0), Scalar(1));
}

/// dp/ds away from the kinks. At |x - s| == r the value is 0; at s == x the
/// caller supplies the side the agent is on (-1 left of the target, +1 right),
/// normally the side it arrived from.
template <typename Scalar>
Scalar sensing_grad(Scalar x, Scalar s, Scalar range, int side_at_kink = 0) {
  using std::abs;
  const Scalar d = s - x;
  if (abs(d) >= range) return Scalar(0);
  if (d == Scalar(0)) return Scalar(-side_at_kink) / range;
  return (d < Scalar(0) ? Scalar(1) : Scalar(-1)) / range;
}

/// Joint detection 1 - prod(1 - p_j). Agents with p_j = 0 do not change it.
template <typename Derived>
typename Derived::Scalar joint_detection(const Eigen::MatrixBase<Derived>& probs) {
  using Scalar = typename Derived::Scalar;
  Scalar miss(1);
  for (Eigen::Index k = 0; k < probs.size(); ++k)
    miss *= Scalar(1) - std::clamp(probs(k), Scalar(0), Scalar(1));
  return std::clamp(Scalar(1) - miss, Scalar(0), Scalar(1));
}

/// Joint detection of target `target` by agents at `positions`.
double joint_detection(const Scenario& scenario, std::size_t target,
                       const Eigen::VectorXd& positions);

/// dR/dt. Zero on the boundary arc (R = 0 and A <= B P).
template <typename Scalar>
Scalar uncertainty_rate(Scalar r, Scalar detection, Scalar growth, Scalar decay) {
  if (r < Scalar(0))
    throw SimulationError("uncertainty_rate: negative uncertainty " + std::to_string(double(r)));
  if (r == Scalar(0) && growth <= decay * detection) return Scalar(0);
  return growth - decay * detection;
}

inline int sgn(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace persimon
