#pragma once

// Central finite differences of J, built only on simulate() and cost(), used
// to check the event-driven gradient coordinate by coordinate.

#include <optional>
#include <string>
#include <vector>

#include "persimon/control.hpp"
#include "persimon/model.hpp"

namespace persimon {

struct Coordinate {
  int agent = 0;
  bool dwell = false;  // false: theta_l, true: w_l
  int index = 0;       // 0-based l

  std::string name() const;
};

/// All 2 * Gamma_j coordinates of every agent, theta block first.
std::vector<Coordinate> all_coordinates(const std::vector<AgentParams>& params);

/// (J(p + delta e) - J(p - delta e)) / (2 delta), or nullopt when either
/// perturbed point leaves the feasible box.
std::optional<double> fd_gradient(const Scenario& scenario, const std::vector<AgentParams>& params,
                                  const Coordinate& coord, double delta);

struct FdEntry {
  Coordinate coord;
  double ipa = 0.0;
  double fd_fine = 0.0;    // delta = deltas[0]
  double fd_coarse = 0.0;  // delta = deltas[1]
  double forward = 0.0;    // (J(p + delta e) - J(p)) / delta, fine delta
  double backward = 0.0;   // (J(p) - J(p - delta e)) / delta, fine delta
  double rel_error = 0.0;  // |ipa - fd_fine| / max(|fd_fine|, floor)
  bool skipped = false;    // infeasible perturbation
  bool smooth = false;     // the two central values agree and so do the one-sided ones
  bool pass = false;       // smooth and rel_error <= tol
};

struct GradCheckOptions {
  double tol = 1e-2;
  double fine_delta = 1e-4;
  double coarse_delta = 1e-3;
  double smooth_agreement = 0.05;  // relative disagreement of the two central values still counted as smooth
  double kink_agreement = 1e-3;    // relative forward/backward disagreement still counted as smooth
  double rel_floor = 1e-8;
  double pass_threshold = 0.95;    // required fraction of smooth coordinates that pass
  double corrupt_ipa_scale = 1.0;  // negative control: scales the IPA values before comparison
};

struct FdReport {
  std::vector<FdEntry> entries;
  int smooth = 0;
  int passed = 0;
  int skipped = 0;
  double pass_rate = 1.0;  // passed / smooth; 1 when nothing is smooth
  bool ok = true;
};

FdReport grad_check(const Scenario& scenario, const std::vector<AgentParams>& params,
                    const GradCheckOptions& options = {});

/// Worker count for perturbation runs: hardware concurrency, capped by PERSIMON_THREADS.
unsigned worker_threads();

}  // namespace persimon
