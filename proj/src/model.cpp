#include "persimon/model.hpp"

namespace persimon {

std::string to_string(InfoMode mode) {
  switch (mode) {
    case InfoMode::Centralized: return "CENTRALIZED";
    case InfoMode::Almost: return "ALMOST";
    case InfoMode::Local: return "LOCAL";
  }
  return "?";
}

InfoMode info_mode_from_string(const std::string& name) {
  if (name == "CENTRALIZED") return InfoMode::Centralized;
  if (name == "ALMOST") return InfoMode::Almost;
  if (name == "LOCAL") return InfoMode::Local;
  throw ValidationError("unknown information mode '" + name +
                        "' (expected CENTRALIZED, ALMOST or LOCAL)");
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void validate(const Scenario& sc) {
  if (!finite(sc.length) || sc.length <= 0.0) fail("mission.L", "must be > 0");
  if (!finite(sc.horizon) || sc.horizon <= 0.0) fail("mission.T", "must be > 0");
  for (std::size_t i = 0; i < sc.targets.size(); ++i) {
    const Target& tg = sc.targets[i];
    const std::string at = "targets[" + std::to_string(i) + "]";
    if (!finite(tg.x) || tg.x < 0.0 || tg.x > sc.length) fail(at + ".x", "outside [0, L]");
    if (!finite(tg.growth) || tg.growth <= 0.0) fail(at + ".A", "must be > 0");
    if (!finite(tg.decay) || tg.decay <= tg.growth) fail(at + ".B", "must exceed A (B > A > 0)");
    if (!finite(tg.r0) || tg.r0 < 0.0) fail(at + ".R0", "must be >= 0");
  }
  double max_range = 0.0;
  for (std::size_t j = 0; j < sc.agents.size(); ++j) {
    const AgentSpec& ag = sc.agents[j];
    const std::string at = "agents[" + std::to_string(j) + "]";
    if (!finite(ag.s0) || ag.s0 < 0.0 || ag.s0 > sc.length) fail(at + ".s0", "outside [0, L]");
    if (ag.u0 < -1 || ag.u0 > 1) fail(at + ".u0", "must be -1, 0 or 1");
    if (!finite(ag.range) || ag.range <= 0.0) fail(at + ".r", "must be > 0");
    max_range = std::max(max_range, ag.range);
  }
  if (!sc.agents.empty() && !(sc.comm_range >= 2.0 * max_range))
    fail("r_c", "must be at least twice the sensing range");
  const Numerics& nm = sc.numerics;
  if (!finite(nm.step) || nm.step <= 0.0) fail("numerics.h", "must be > 0");
  if (!finite(nm.event_tol) || nm.event_tol <= 0.0) fail("numerics.eps_event", "must be > 0");
  if (!finite(nm.sample_dt) || nm.sample_dt <= 0.0) fail("numerics.sample_dt", "must be > 0");
}

double joint_detection(const Scenario& sc, std::size_t target, const Eigen::VectorXd& positions) {
  const Target& tg = sc.targets.at(target);
  Eigen::VectorXd probs(static_cast<Eigen::Index>(sc.agents.size()));
  for (std::size_t j = 0; j < sc.agents.size(); ++j)
    probs(static_cast<Eigen::Index>(j)) =
        sensing_prob(tg.x, positions(static_cast<Eigen::Index>(j)), sc.agents[j].range);
  return joint_detection(probs);
}

}  // namespace persimon
