#include "persimon/simulator.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace persimon {

namespace {

using poly::Poly;

constexpr int kMaxStalledSteps = 10000;

std::string interval_name(double t0, double t1) {
  std::ostringstream os;
  os.precision(17);
  os << "[" << t0 << ", " << t1 << "]";
  return os.str();
}

Eigen::Index idx(std::size_t k) { return static_cast<Eigen::Index>(k); }

// Highest non-zero coefficient index (0 for the zero polynomial).
Eigen::Index degree(const Poly& c) {
  Eigen::Index d = c.size() - 1;
  while (d > 0 && c(d) == 0.0) --d;
  return d;
}

// Right end of a bisection between lo (predicate false) and hi (predicate true),
// refined until the bracket cannot shrink further in double precision.
template <typename Pred>
double bisect(const Poly& f, double lo, double hi, Pred crossed) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (crossed(poly::eval(f, mid)))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// First sigma in (0, window] at which `crossed(f(sigma))` holds. Crossings
// already in progress at sigma = 0 are the caller's business. Linear polynomials are solved directly; otherwise the
// window is scanned on a grid of spacing `step` and the bracket bisected.
template <typename Pred>
std::optional<double> first_crossing(const Poly& f, double window, double step, Pred crossed) {
  if (window <= 0.0) return std::nullopt;
  if (degree(f) <= 1) {
    const double a = f(0);
    const double b = f.size() > 1 ? f(1) : 0.0;
    if (crossed(a) || b == 0.0) return std::nullopt;
    const double root = -a / b;
    if (!(root >= 0.0) || root > window) return std::nullopt;
    // the root itself may round to the uncrossed side; step to the first
    // representable time where the predicate holds
    double hi = root;
    for (int k = 0; k < 4 && !crossed(poly::eval(f, hi)); ++k)
      hi = std::nextafter(hi, std::numeric_limits<double>::infinity());
    if (!crossed(poly::eval(f, hi))) return std::nullopt;
    return hi > window ? std::nullopt : std::optional<double>(hi);
  }
  double lo = 0.0;
  for (long k = 1;; ++k) {
    const double hi = std::min(window, static_cast<double>(k) * step);
    if (crossed(poly::eval(f, hi))) return bisect(f, lo, hi, crossed);
    if (hi >= window) break;
    lo = hi;
  }
  return std::nullopt;
}

}  // namespace

SensingZone sensing_zone(double x, double s, double range, int u, int previous_side) {
  const double d = s - x;
  SensingZone z;
  z.side = d > 0.0 ? 1 : d < 0.0 ? -1 : (u != 0 ? u : previous_side);
  // a snapped guard position x +- r only reproduces |s - x| = r up to rounding
  const double ad = std::abs(d);
  const double slack = 4.0 * std::numeric_limits<double>::epsilon() * (std::abs(x) + range);
  if (ad < range - slack)
    z.inside = true;
  else if (ad > range + slack)
    z.inside = false;
  else
    z.inside = (u != 0 && u == -sgn(d));
  return z;
}

std::array<int, kNumEventKinds> SimRecord::event_counts() const {
  std::array<int, kNumEventKinds> counts{};
  for (const EventRecord& ev : events) ++counts[static_cast<std::size_t>(ev.kind)];
  return counts;
}

HybridSimulator::HybridSimulator(const Scenario& scenario, const std::vector<AgentParams>& params,
                                 SimOptions options)
    : sc_(scenario), params_(params), options_(options) {
  validate(sc_);
  if (params_.size() != sc_.agents.size())
    throw ValidationError("params: expected " + std::to_string(sc_.agents.size()) +
                          " agent parameter sets, got " + std::to_string(params_.size()));
  for (std::size_t j = 0; j < params_.size(); ++j)
    validate(params_[j], sc_.length, "agents[" + std::to_string(j) + "]");

  const std::size_t n = sc_.agents.size();
  const std::size_t m = sc_.targets.size();
  record_.horizon = sc_.horizon;
  s_.resize(idx(n));
  r_.resize(idx(m));
  phase_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    s_(idx(j)) = sc_.agents[j].s0;
    bool conflict = false;
    phase_[j] = start_phase(params_[j], sc_.agents[j].s0, sc_.agents[j].u0, &conflict);
    if (conflict)
      record_.warnings.push_back("agents[" + std::to_string(j) +
                                 "]: u0 disagrees with the direction to theta_1; using the latter");
  }
  side_.resize(idx(m), idx(n));
  inside_.resize(idx(m), idx(n));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const int u = control_value(phase_[j]);
      const SensingZone z = sensing_zone(sc_.targets[i].x, s_(idx(j)), sc_.agents[j].range, u,
                                         u != 0 ? u : -1);
      side_(idx(i), idx(j)) = z.side;
      inside_(idx(i), idx(j)) = z.inside ? 1 : 0;
    }
  }
  branch_.assign(m, Branch::Interior);
  for (std::size_t i = 0; i < m; ++i) {
    const Target& tg = sc_.targets[i];
    r_(idx(i)) = tg.r0;
    if (tg.r0 == 0.0 && tg.growth <= tg.decay * joint_detection(sc_, i, s_))
      branch_[i] = Branch::Boundary;
  }
  rebuild_model();
}

void HybridSimulator::rebuild_model() {
  const std::size_t n = sc_.agents.size();
  const std::size_t m = sc_.targets.size();
  model_.t = t_;
  model_.u.resize(idx(n));
  for (std::size_t j = 0; j < n; ++j) model_.u(idx(j)) = control_value(phase_[j]);
  model_.miss.assign(m, Poly());
  model_.rate.assign(m, Poly());
  model_.r.assign(m, Poly());
  model_.dp_ds.setZero(idx(m), idx(n));
  for (std::size_t i = 0; i < m; ++i) {
    const Target& tg = sc_.targets[i];
    Poly q = poly::constant(1.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (!inside_(idx(i), idx(j))) continue;
      const double range = sc_.agents[j].range;
      const int side = side_(idx(i), idx(j));
      const double c0 = side * (s_(idx(j)) - tg.x) / range;
      const double c1 = side * model_.u(idx(j)) / range;
      q = poly::mul_linear(q, c0, c1);
      model_.dp_ds(idx(i), idx(j)) = -side / range;
    }
    Poly rate = tg.decay * q;
    rate(0) += tg.growth - tg.decay;
    if (branch_[i] == Branch::Boundary) {
      model_.r[i] = poly::constant(0.0);
    } else {
      Poly rr = poly::integral(rate);
      rr(0) = r_(idx(i));
      model_.r[i] = std::move(rr);
    }
    model_.miss[i] = std::move(q);
    model_.rate[i] = std::move(rate);
  }
}

std::optional<double> HybridSimulator::uncertainty_guard(std::size_t i, double window) const {
  if (window <= 0.0) return std::nullopt;
  const Target& tg = sc_.targets[i];
  // Each factor (1 - p_ij) is linear and non-negative on the interval, so
  // the product is bracketed by the products of its endpoint extremes.
  double q_min = 1.0;
  double q_max = 1.0;
  for (std::size_t j = 0; j < sc_.agents.size(); ++j) {
    if (!inside_(idx(i), idx(j))) continue;
    const double range = sc_.agents[j].range;
    const int side = side_(idx(i), idx(j));
    const double a = side * (s_(idx(j)) - tg.x) / range;
    const double b = a + side * model_.u(idx(j)) * window / range;
    q_min *= std::max(0.0, std::min(a, b));
    q_max *= std::max(a, b);
  }
  const double step = sc_.numerics.step;
  const double rate0 = model_.rate[i](0);
  // rates are O(A + B); right at a rho+/rho0 instant they are zero up to rounding
  const double rate_tol = 64.0 * std::numeric_limits<double>::epsilon() * (tg.growth + tg.decay);
  if (branch_[i] == Branch::Interior) {
    if (r_(idx(i)) <= 0.0) {
      if (rate0 < -rate_tol) return 0.0;
      if (std::abs(rate0) <= rate_tol && degree(model_.rate[i]) == 0) return std::nullopt;
    }
    const double min_rate = tg.growth - tg.decay + tg.decay * q_min;
    if (r_(idx(i)) + std::min(min_rate, 0.0) * window > 0.0) return std::nullopt;
    return first_crossing(model_.r[i], window, step, [](double v) { return v <= 0.0; });
  }
  if (rate0 > rate_tol) return 0.0;
  const double max_rate = tg.growth - tg.decay + tg.decay * q_max;
  if (max_rate <= 0.0) return std::nullopt;
  return first_crossing(model_.rate[i], window, step, [](double v) { return v > 0.0; });
}

PendingEvents HybridSimulator::detect_next_event() const {
  const std::size_t n = sc_.agents.size();
  const std::size_t m = sc_.targets.size();
  const double horizon = sc_.horizon;
  const double tol = sc_.numerics.event_tol;

  struct Candidate {
    double time;
    int kind;  // 0 control, 1 motion guard, 2 uncertainty guard
    int agent;
    int target;
    double guard;
    PhaseBoundary boundary;
  };
  std::vector<Candidate> cands;

  for (std::size_t j = 0; j < n; ++j) {
    if (auto b = next_phase_boundary(phase_[j], params_[j], s_(idx(j)), t_, horizon))
      cands.push_back({b->time, 0, static_cast<int>(j), kNoIndex, 0.0, *b});
    const int u = model_.u(idx(j));
    if (u == 0) continue;
    const double s = s_(idx(j));
    const double range = sc_.agents[j].range;
    for (std::size_t i = 0; i < m; ++i) {
      const double x = sc_.targets[i].x;
      for (const double g : {x - range, x, x + range}) {
        if ((g - s) * u <= 0.0) continue;
        cands.push_back({t_ + std::abs(g - s), 1, static_cast<int>(j), static_cast<int>(i), g, {}});
      }
    }
  }
  double motion_min = horizon;
  for (const Candidate& c : cands) motion_min = std::min(motion_min, c.time);
  const double window = motion_min - t_;
  for (std::size_t i = 0; i < m; ++i)
    if (auto sigma = uncertainty_guard(i, window))
      cands.push_back({t_ + *sigma, 2, kNoIndex, static_cast<int>(i), 0.0, {}});

  PendingEvents pe;
  double tmin = horizon;
  for (const Candidate& c : cands) tmin = std::min(tmin, c.time);
  if (tmin >= horizon) {
    pe.time = horizon;
    pe.horizon = true;
    pe.records.push_back({horizon, EventKind::Horizon, kNoIndex, kNoIndex, kNoIndex});
    return pe;
  }
  pe.time = tmin;
  for (const Candidate& c : cands) {
    if (c.time > tmin + tol) continue;
    switch (c.kind) {
      case 0:
        pe.control.emplace_back(c.agent, c.boundary);
        if (c.boundary.kind != BoundaryKind::Exhaust)
          pe.records.push_back({tmin, control_event_kind(c.boundary.u_before, c.boundary.u_after),
                                c.agent, kNoIndex, c.boundary.point});
        break;
      case 1: {
        pe.snaps.emplace_back(c.agent, c.guard);
        const bool at_target = c.guard == sc_.targets[static_cast<std::size_t>(c.target)].x;
        EventKind kind = EventKind::Cross;
        if (!at_target) kind = inside_(c.target, c.agent) ? EventKind::PiZero : EventKind::PiPlus;
        pe.records.push_back({tmin, kind, c.agent, c.target, kNoIndex});
        break;
      }
      case 2: {
        const EventKind kind = branch_[static_cast<std::size_t>(c.target)] == Branch::Interior
                                   ? EventKind::RhoZero
                                   : EventKind::RhoPlus;
        pe.records.push_back({tmin, kind, kNoIndex, c.target, kNoIndex});
        break;
      }
      default: break;
    }
  }
  std::stable_sort(pe.records.begin(), pe.records.end(), event_order);
  return pe;
}

void HybridSimulator::record_samples_until(double t1) {
  if (!options_.record_samples) return;
  const double dt = sc_.numerics.sample_dt;
  const std::size_t m = sc_.targets.size();
  for (;;) {
    const double ts = static_cast<double>(next_sample_) * dt;
    if (ts >= t1 || ts > sc_.horizon) break;
    const double sigma = ts - t_;
    Sample smp;
    smp.t = ts;
    smp.s = s_ + model_.u.cast<double>() * sigma;
    smp.u = model_.u;
    smp.r.resize(idx(m));
    smp.p.resize(idx(m));
    for (std::size_t i = 0; i < m; ++i) {
      smp.r(idx(i)) = std::max(0.0, poly::eval(model_.r[i], sigma));
      smp.p(idx(i)) = std::clamp(1.0 - poly::eval(model_.miss[i], sigma), 0.0, 1.0);
    }
    record_.samples.push_back(std::move(smp));
    ++next_sample_;
  }
}

IntervalRecord HybridSimulator::integrate_interval(double t1) {
  const std::size_t n = sc_.agents.size();
  const std::size_t m = sc_.targets.size();
  const double dt = t1 - t_;
  if (!(dt >= 0.0)) throw SimulationError("integrate_interval: end before start " + interval_name(t_, t1));

  IntervalRecord rec;
  rec.t0 = t_;
  rec.t1 = t1;
  rec.event_begin = pending_event_begin_;
  rec.event_end = record_.events.size();
  rec.s_start = s_;
  rec.u = model_.u;
  rec.r_start = r_;
  rec.branch = branch_;
  rec.dp_ds = model_.dp_ds;
  rec.integral_r.setZero(idx(m));
  rec.g_end.setZero(idx(m), idx(n));
  rec.g_integral.setZero(idx(m), idx(n));

  for (std::size_t i = 0; i < m; ++i) {
    if (branch_[i] == Branch::Interior) rec.integral_r(idx(i)) = poly::eval(poly::integral(model_.r[i]), dt);
    const Target& tg = sc_.targets[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (!inside_(idx(i), idx(j))) continue;
      Poly prod = poly::constant(1.0);
      for (std::size_t g = 0; g < n; ++g) {
        if (g == j || !inside_(idx(i), idx(g))) continue;
        const double range = sc_.agents[g].range;
        const int side = side_(idx(i), idx(g));
        prod = poly::mul_linear(prod, side * (s_(idx(g)) - tg.x) / range,
                                side * model_.u(idx(g)) / range);
      }
      const Poly big_g = poly::integral(prod);
      rec.g_end(idx(i), idx(j)) = poly::eval(big_g, dt);
      rec.g_integral(idx(i), idx(j)) = poly::eval(poly::integral(big_g), dt);
    }
  }

  record_samples_until(t1);

  s_ += model_.u.cast<double>() * dt;
  for (std::size_t i = 0; i < m; ++i) {
    if (branch_[i] == Branch::Boundary) {
      r_(idx(i)) = 0.0;
      continue;
    }
    double v = poly::eval(model_.r[i], dt);
    if (v < 0.0) {
      if (v < -sc_.numerics.event_tol)
        throw SimulationError("target " + std::to_string(i) + " uncertainty fell to " +
                              std::to_string(v) + " inside interval " + interval_name(t_, t1) +
                              " (missed event)");
      v = 0.0;
    }
    r_(idx(i)) = v;
  }
  rec.s_end = s_;
  rec.r_end = r_;
  t_ = t1;
  if (dt > 0.0) {
    record_.intervals.push_back(rec);
    pending_event_begin_ = record_.events.size();
  }
  return rec;
}

void HybridSimulator::apply_events(const PendingEvents& pe) {
  const std::size_t n = sc_.agents.size();
  const std::size_t m = sc_.targets.size();
  const double tau = pe.time;
  std::vector<EventRecord> logged;

  if (pe.horizon) {
    record_.events.push_back({sc_.horizon, EventKind::Horizon, kNoIndex, kNoIndex, kNoIndex});
    finished_ = true;
    return;
  }

  for (const auto& [j, g] : pe.snaps) s_(j) = g;
  for (const EventRecord& ev : pe.records) {
    if (ev.kind == EventKind::RhoZero) {
      r_(ev.target) = 0.0;
      branch_[static_cast<std::size_t>(ev.target)] = Branch::Boundary;
      logged.push_back(ev);
    } else if (ev.kind == EventKind::RhoPlus) {
      r_(ev.target) = 0.0;
      branch_[static_cast<std::size_t>(ev.target)] = Branch::Interior;
      logged.push_back(ev);
    }
  }
  for (const auto& [j, b] : pe.control) {
    const auto ju = static_cast<std::size_t>(j);
    if (b.kind == BoundaryKind::Arrival) s_(j) = params_[ju].theta(b.point - 1);
    phase_[ju] = advance_phase(phase_[ju], b, params_[ju]);
    if (b.kind != BoundaryKind::Exhaust)
      logged.push_back({tau, control_event_kind(b.u_before, b.u_after), j, kNoIndex, b.point});
  }

  std::vector<EventRecord> sensing;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const int u = control_value(phase_[j]);
      const SensingZone z = sensing_zone(sc_.targets[i].x, s_(idx(j)), sc_.agents[j].range, u,
                                         side_(idx(i), idx(j)));
      const bool was_inside = inside_(idx(i), idx(j)) != 0;
      if (z.side != side_(idx(i), idx(j)))
        logged.push_back({tau, EventKind::Cross, static_cast<int>(j), static_cast<int>(i), kNoIndex});
      if (z.inside != was_inside)
        sensing.push_back({tau, z.inside ? EventKind::PiPlus : EventKind::PiZero, static_cast<int>(j),
                           static_cast<int>(i), kNoIndex});
      side_(idx(i), idx(j)) = z.side;
      inside_(idx(i), idx(j)) = z.inside ? 1 : 0;
    }
  }
  for (const EventRecord& pi : sensing) {
    logged.push_back(pi);
    const auto i = static_cast<std::size_t>(pi.target);
    for (std::size_t j = 0; j < n; ++j) {
      if (static_cast<int>(j) == pi.agent) continue;
      if (std::abs(s_(idx(j)) - sc_.targets[i].x) > sc_.agents[j].range) continue;
      logged.push_back({tau, pi.kind == EventKind::PiPlus ? EventKind::DeltaPlus : EventKind::DeltaMinus,
                        static_cast<int>(j), pi.target, pi.agent});
    }
  }
  std::stable_sort(logged.begin(), logged.end(), event_order);
  record_.events.insert(record_.events.end(), logged.begin(), logged.end());
  rebuild_model();
}

void HybridSimulator::step() {
  if (finished_) return;
  const PendingEvents pe = detect_next_event();
  integrate_interval(pe.time);
  apply_events(pe);
}

SimRecord HybridSimulator::finish() && {
  int stalled = 0;
  double last_t = t_;
  while (!finished_) {
    step();
    if (t_ - last_t > sc_.numerics.event_tol) {
      stalled = 0;
      last_t = t_;
    } else if (++stalled > kMaxStalledSteps) {
      throw SimulationError("no time progress at t = " + std::to_string(t_) +
                            " (event chattering)");
    }
  }
  if (options_.record_samples) {
    const double dt = sc_.numerics.sample_dt;
    const std::size_t m = sc_.targets.size();
    for (;;) {
      const double ts = static_cast<double>(next_sample_) * dt;
      if (ts > sc_.horizon * (1.0 + 1e-12)) break;
      Sample smp;
      smp.t = ts;
      smp.s = s_;
      smp.u = model_.u;
      smp.r = r_;
      smp.p.resize(idx(m));
      for (std::size_t i = 0; i < m; ++i) smp.p(idx(i)) = joint_detection(sc_, i, s_);
      record_.samples.push_back(std::move(smp));
      ++next_sample_;
    }
  }
  record_.cost = cost(record_);
  return std::move(record_);
}

SimRecord simulate(const Scenario& scenario, const std::vector<AgentParams>& params, SimOptions options) {
  HybridSimulator sim(scenario, params, options);
  return std::move(sim).finish();
}

double cost(const SimRecord& record) {
  double total = 0.0;
  for (const IntervalRecord& iv : record.intervals) total += iv.integral_r.sum();
  return total / record.horizon;
}

}  // namespace persimon
