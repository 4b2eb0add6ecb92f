#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "persimon/control.hpp"
#include "persimon/model.hpp"

namespace persimon::testing {

struct Case {
  Scenario scenario;
  std::vector<AgentParams> params;
};

/// Random mission on [0, length] with switching points and dwells drawn uniformly.
inline Case random_case(unsigned seed, int agents, int targets, double horizon, int gamma, double length = 20.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Case c;
  Scenario& sc = c.scenario;
  sc.length = length;
  sc.horizon = horizon;
  for (int i = 0; i < targets; ++i) {
    const double a = 0.5 + u(rng);
    sc.targets.push_back({0.1 * length + 0.8 * length * u(rng), a, a + 2.0 + 3.0 * u(rng), 3.0 * u(rng)});
  }
  double max_range = 0.0;
  for (int j = 0; j < agents; ++j) {
    const double range = 2.0 + 2.0 * u(rng);
    max_range = std::max(max_range, range);
    sc.agents.push_back({length * u(rng), 0, range});
    AgentParams p;
    p.theta.resize(gamma);
    p.dwell.resize(gamma);
    for (int l = 0; l < gamma; ++l) {
      p.theta(l) = 0.05 * length + 0.9 * length * u(rng);
      p.dwell(l) = 0.2 + 2.0 * u(rng);
    }
    c.params.push_back(p);
  }
  sc.comm_range = 2.0 * max_range + 4.0 * u(rng);
  return c;
}

/// The bundled section-VI mission: 3 agents, 7 targets at 5i, A = 1, B = 5, R0 = 1.
inline Case monitoring_mission(int gamma = 56) {
  Case c;
  Scenario& sc = c.scenario;
  sc.length = 40.0;
  sc.horizon = 300.0;
  sc.comm_range = 6.0;
  for (int i = 1; i <= 7; ++i) sc.targets.push_back({5.0 * i, 1.0, 5.0, 1.0});
  const double pattern[3][4] = {{5, 10, 15, 10}, {15, 20, 25, 20}, {25, 30, 35, 30}};
  for (int j = 0; j < 3; ++j) {
    sc.agents.push_back({0.5 * j, 1, 3.0});
    AgentParams p;
    p.theta.resize(gamma);
    p.dwell.setConstant(gamma, 0.5);
    for (int l = 0; l < gamma; ++l) p.theta(l) = pattern[j][l % 4];
    c.params.push_back(p);
  }
  return c;
}

/// Position of an agent following (theta, w) from s0 at unit speed, written
/// directly from the parameterization.
inline double reference_position(const AgentParams& p, double s0, double t) {
  double s = s0;
  double clock = 0.0;
  for (Eigen::Index l = 0; l < p.size(); ++l) {
    const double leg = std::abs(p.theta(l) - s);
    if (t <= clock + leg) return s + (p.theta(l) > s ? 1.0 : -1.0) * (t - clock);
    clock += leg;
    s = p.theta(l);
    if (t <= clock + p.dwell(l)) return s;
    clock += p.dwell(l);
  }
  return s;
}

}  // namespace persimon::testing
