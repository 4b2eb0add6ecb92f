#pragma once

// Event-driven integration of the coupled agent/target hybrid dynamics.
//
// Between consecutive events every agent moves at a constant velocity, so each
// detection probability is linear in time and every target's rate, uncertainty
// and collaboration integral is an exact polynomial. Motion guards (switching
// points, range boundaries, target crossings) are solved in closed form;
// uncertainty guards (R_i -> 0, rate leaving 0 on a boundary arc) are bracketed
// on a fixed grid and refined by bisection.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "persimon/control.hpp"
#include "persimon/events.hpp"
#include "persimon/model.hpp"
#include "persimon/poly.hpp"

namespace persimon {

enum class Branch : std::uint8_t { Interior, Boundary };

/// Everything the gradient engine needs about one inter-event interval.
/// Matrices indexed (target i, agent j) are M x N.
struct IntervalRecord {
  double t0 = 0.0;
  double t1 = 0.0;
  // Events logged at t0, applied before this interval starts: [event_begin, event_end).
  std::size_t event_begin = 0;
  std::size_t event_end = 0;
  Eigen::VectorXd s_start, s_end;  // agent positions
  Eigen::VectorXi u;               // agent controls
  Eigen::VectorXd r_start, r_end;  // target uncertainties
  std::vector<Branch> branch;      // active uncertainty dynamics per target
  Eigen::VectorXd integral_r;      // integral of R_i over the interval
  Eigen::MatrixXd dp_ds;           // dp_ij/ds_j, constant on the interval
  Eigen::MatrixXd g_end;           // G_ij(t1): integral of prod_{g in N_ij} (1 - p_ig)
  Eigen::MatrixXd g_integral;      // integral of G_ij(t) over the interval

  double length() const { return t1 - t0; }
};

struct Sample {
  double t = 0.0;
  Eigen::VectorXd s;
  Eigen::VectorXi u;
  Eigen::VectorXd r;
  Eigen::VectorXd p;  // joint detection P_i
};

struct SimRecord {
  double horizon = 0.0;
  std::vector<EventRecord> events;
  std::vector<IntervalRecord> intervals;
  std::vector<Sample> samples;
  std::vector<std::string> warnings;
  double cost = 0.0;

  std::array<int, kNumEventKinds> event_counts() const;
};

struct SimOptions {
  bool record_samples = true;
};

/// Per-target polynomial model of the interval that starts at the current time.
struct IntervalModel {
  double t = 0.0;
  Eigen::VectorXi u;
  std::vector<poly::Poly> miss;  // Q_i(sigma) = prod_{j inside} (1 - p_ij)
  std::vector<poly::Poly> rate;  // A_i - B_i (1 - Q_i)
  std::vector<poly::Poly> r;     // R_i(sigma); identically 0 on a boundary arc
  Eigen::MatrixXd dp_ds;
};

/// Events found by the guard search: the common time and the records that will
/// be logged there (predicted kinds for motion guards).
struct PendingEvents {
  double time = 0.0;
  std::vector<EventRecord> records;
  std::vector<std::pair<int, PhaseBoundary>> control;  // includes silent Exhaust boundaries
  std::vector<std::pair<int, double>> snaps;           // agent -> exact guard position
  bool horizon = false;
};

/// Step-by-step driver. `simulate` is the usual entry point; the class is
/// public so tests can probe guard detection and interval integration.
class HybridSimulator {
 public:
  HybridSimulator(const Scenario& scenario, const std::vector<AgentParams>& params,
                  SimOptions options = {});

  double time() const { return t_; }
  bool finished() const { return finished_; }
  const Eigen::VectorXd& positions() const { return s_; }
  const Eigen::VectorXd& uncertainty() const { return r_; }
  const std::vector<Branch>& branches() const { return branch_; }
  const std::vector<PhaseState>& phases() const { return phase_; }
  const IntervalModel& model() const { return model_; }

  /// Earliest guard crossing at or after the current time (strictly after for
  /// motion and uncertainty guards); HORIZON when nothing fires before T.
  PendingEvents detect_next_event() const;

  /// Integrate to `t1` (no guard may fire strictly inside) and return the record.
  IntervalRecord integrate_interval(double t1);

  /// Full step: detect, integrate, apply events.
  void step();

  SimRecord finish() &&;

 private:
  void rebuild_model();
  void apply_events(const PendingEvents& pending);
  void record_samples_until(double t1);
  std::optional<double> uncertainty_guard(std::size_t i, double window) const;

  Scenario sc_;
  std::vector<AgentParams> params_;
  SimOptions options_;

  double t_ = 0.0;
  bool finished_ = false;
  Eigen::VectorXd s_;
  Eigen::VectorXd r_;
  std::vector<Branch> branch_;
  std::vector<PhaseState> phase_;
  Eigen::MatrixXi side_;    // sign(s_j - x_i) over the upcoming interval
  Eigen::MatrixXi inside_;  // 1 while p_ij > 0 over the upcoming interval
  IntervalModel model_;

  std::size_t next_sample_ = 0;
  std::size_t pending_event_begin_ = 0;
  SimRecord record_;
};

/// Simulate the whole horizon. Throws ValidationError on bad input and
/// SimulationError on integrator failure.
SimRecord simulate(const Scenario& scenario, const std::vector<AgentParams>& params,
                   SimOptions options = {});

/// J = (1/T) sum_k sum_i integral of R_i over interval k.
double cost(const SimRecord& record);

/// Zone of agent j relative to target i for the interval starting now.
struct SensingZone {
  int side = -1;
  bool inside = false;
};
SensingZone sensing_zone(double x, double s, double range, int u, int previous_side);

}  // namespace persimon
