#include "persimon/infoplane.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace persimon {

namespace {

Eigen::Index idx(std::size_t k) { return static_cast<Eigen::Index>(k); }

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

// Agents sharing at least one target with j.
std::vector<int> collaborator_union(const NeighborSnapshot& snap, int j) {
  std::vector<int> out;
  for (const int i : snap.targets_near[static_cast<std::size_t>(j)])
    for (const int k : snap.collaborators[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
      if (!contains(out, k)) out.push_back(k);
  return out;
}

// i in T_j over the open interval (membership is constant there).
std::vector<char> interval_membership(const Scenario& sc, const IntervalRecord& iv, std::size_t j) {
  const double mid = 0.5 * (iv.s_start(idx(j)) + iv.s_end(idx(j)));
  std::vector<char> member(sc.targets.size());
  for (std::size_t i = 0; i < sc.targets.size(); ++i)
    member[i] = std::abs(mid - sc.targets[i].x) <= sc.agents[j].range ? 1 : 0;
  return member;
}

bool rows_equal(const AgentIpa& a, const AgentIpa& b, Eigen::Index i) {
  return a.dr_dtheta.row(i) == b.dr_dtheta.row(i) && a.dr_dw.row(i) == b.dr_dw.row(i);
}

bool row_zero(const AgentIpa& b, Eigen::Index i) {
  return (b.dr_dtheta.row(i).array() == 0.0).all() && (b.dr_dw.row(i).array() == 0.0).all();
}

}  // namespace

bool NeighborSnapshot::in_target_set(int j, int i) const {
  return contains(targets_near[static_cast<std::size_t>(j)], i);
}

NeighborSnapshot neighborhoods(const Eigen::VectorXd& positions, const Scenario& sc, double t) {
  const std::size_t n = sc.agents.size();
  const std::size_t m = sc.targets.size();
  NeighborSnapshot snap;
  snap.t = t;
  snap.agents_near.assign(n, {});
  snap.targets_near.assign(n, {});
  snap.target_agents.assign(m, {});
  snap.collaborators.assign(m, std::vector<std::vector<int>>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k)
      if (k != j && std::abs(positions(idx(j)) - positions(idx(k))) <= sc.comm_range)
        snap.agents_near[j].push_back(static_cast<int>(k));
    for (std::size_t i = 0; i < m; ++i) {
      if (std::abs(positions(idx(j)) - sc.targets[i].x) <= sc.agents[j].range) {
        snap.targets_near[j].push_back(static_cast<int>(i));
        snap.target_agents[i].push_back(static_cast<int>(j));
      }
    }
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (const int k : snap.target_agents[i])
        if (k != static_cast<int>(j)) snap.collaborators[i][j].push_back(k);
  return snap;
}

std::string to_string(Visibility v) {
  switch (v) {
    case Visibility::Own: return "own";
    case Visibility::LocalTarget: return "local_target";
    case Visibility::Collaborator: return "collaborator";
    case Visibility::Broadcast: return "broadcast";
    case Visibility::Global: return "global";
    case Visibility::Hidden: return "hidden";
  }
  return "?";
}

Visibility classify(const VisibilityPolicy& policy, int j, const EventRecord& ev, const NeighborSnapshot& snap) {
  const Visibility fallback = policy.mode == InfoMode::Centralized ? Visibility::Global : Visibility::Hidden;
  if (ev.target == kNoIndex) {
    // agent events; the horizon is a shared clock tick
    if (ev.agent == kNoIndex || ev.agent == j) return Visibility::Own;
    return contains(collaborator_union(snap, j), ev.agent) ? Visibility::Collaborator : fallback;
  }
  if (snap.in_target_set(j, ev.target)) return Visibility::LocalTarget;
  for (const int k : collaborator_union(snap, j))
    if (snap.in_target_set(k, ev.target)) return Visibility::Collaborator;
  if (policy.mode == InfoMode::Almost && ev.kind == EventKind::RhoZero) return Visibility::Broadcast;
  return fallback;
}

std::vector<NeighborSnapshot> event_snapshots(const Scenario& sc, const SimRecord& record) {
  std::vector<NeighborSnapshot> snaps;
  snaps.reserve(record.events.size());
  Eigen::VectorXd last(idx(sc.agents.size()));
  for (std::size_t j = 0; j < sc.agents.size(); ++j) last(idx(j)) = sc.agents[j].s0;
  std::size_t e = 0;
  for (const IntervalRecord& iv : record.intervals) {
    for (; e < iv.event_end; ++e) snaps.push_back(neighborhoods(iv.s_start, sc, record.events[e].time));
    last = iv.s_end;
  }
  for (; e < record.events.size(); ++e) snaps.push_back(neighborhoods(last, sc, record.events[e].time));
  return snaps;
}

std::vector<FilteredEvent> filtered_event_log(const VisibilityPolicy& policy, int j, const SimRecord& record,
                                              const std::vector<NeighborSnapshot>& snapshots) {
  std::vector<FilteredEvent> out;
  out.reserve(record.events.size());
  for (std::size_t e = 0; e < record.events.size(); ++e)
    out.push_back({record.events[e], classify(policy, j, record.events[e], snapshots.at(e))});
  return out;
}

std::vector<EventRecord> visible_events(const VisibilityPolicy& policy, int j, const SimRecord& record,
                                        const std::vector<NeighborSnapshot>& snapshots) {
  std::vector<EventRecord> out;
  for (const FilteredEvent& fe : filtered_event_log(policy, j, record, snapshots))
    if (fe.visibility != Visibility::Hidden) out.push_back(fe.event);
  return out;
}

GradientVector decentralized_gradient(const Scenario& sc, const std::vector<AgentParams>& params,
                                      const SimRecord& record, InfoMode mode) {
  const VisibilityPolicy policy{mode};
  const std::vector<NeighborSnapshot> snaps = event_snapshots(sc, record);
  const bool reentry_reset = mode == InfoMode::Local && sc.local_reentry_reset;
  GradientVector grad;
  grad.reserve(params.size());
  for (std::size_t j = 0; j < params.size(); ++j) {
    const int agent = static_cast<int>(j);
    AgentIpa b = ipa_init(params[j], agent, sc.agents.at(j).s0, sc.targets.size());
    std::vector<char> prev_member;
    for (const IntervalRecord& iv : record.intervals) {
      for (std::size_t e = iv.event_begin; e < iv.event_end; ++e)
        if (classify(policy, agent, record.events[e], snaps[e]) != Visibility::Hidden)
          ipa_event_update(b, record.events[e], params[j]);
      const std::vector<char> member = interval_membership(sc, iv, j);
      if (reentry_reset && !prev_member.empty()) {
        for (std::size_t i = 0; i < member.size(); ++i) {
          if (member[i] && !prev_member[i] && iv.r_start(idx(i)) == 0.0) {
            b.dr_dtheta.row(idx(i)).setZero();
            b.dr_dw.row(idx(i)).setZero();
          }
        }
      }
      ipa_interval_update(b, iv, sc);
      prev_member = member;
    }
    grad.push_back(accumulate_gradient(b, record.horizon));
  }
  return grad;
}

HoldResetAudit audit_hold_reset(const Scenario& sc, const std::vector<AgentParams>& params,
                                const SimRecord& record) {
  HoldResetAudit audit;
  const std::size_t m = sc.targets.size();
  const std::vector<NeighborSnapshot> snaps = event_snapshots(sc, record);
  auto fail = [&](const std::string& what, std::size_t i, std::size_t j, double t) {
    ++audit.violations;
    if (audit.messages.size() < 20) {
      std::ostringstream os;
      os.precision(17);
      os << what << " (target " << i << ", agent " << j << ", t = " << t << ")";
      audit.messages.push_back(os.str());
    }
  };
  for (std::size_t j = 0; j < params.size(); ++j) {
    const int agent = static_cast<int>(j);
    AgentIpa b = ipa_init(params[j], agent, sc.agents.at(j).s0, m);
    std::vector<char> held_zero(m, 0);  // rho0 seen while out of range, not yet re-entered
    for (const IntervalRecord& iv : record.intervals) {
      for (std::size_t e = iv.event_begin; e < iv.event_end; ++e) {
        const EventRecord& ev = record.events[e];
        const AgentIpa before = b;
        ipa_event_update(b, ev, params[j]);
        if (ev.kind != EventKind::RhoZero && ev.kind != EventKind::RhoPlus) continue;
        const auto i = static_cast<std::size_t>(ev.target);
        if (snaps[e].in_target_set(agent, ev.target)) continue;
        ++audit.events_checked;
        if (ev.kind == EventKind::RhoZero) {
          held_zero[i] = 1;
          if (!row_zero(b, idx(i))) fail("nonzero derivative after out-of-range rho0", i, j, ev.time);
        } else if (!rows_equal(before, b, idx(i))) {
          fail("out-of-range rho+ changed the derivative", i, j, ev.time);
        }
      }
      const std::vector<char> member = interval_membership(sc, iv, j);
      const AgentIpa before = b;
      ipa_interval_update(b, iv, sc);
      for (std::size_t i = 0; i < m; ++i) {
        if (member[i]) {
          held_zero[i] = 0;
          continue;
        }
        ++audit.intervals_checked;
        if (!rows_equal(before, b, idx(i))) fail("derivative moved while out of range", i, j, iv.t0);
        if (held_zero[i] && !row_zero(b, idx(i))) fail("derivative left 0 before re-entry", i, j, iv.t0);
      }
    }
  }
  return audit;
}

int unobserved_depletions(const Scenario& sc, const SimRecord& record) {
  const std::vector<NeighborSnapshot> snaps = event_snapshots(sc, record);
  int count = 0;
  for (std::size_t e = 0; e < record.events.size(); ++e)
    if (record.events[e].kind == EventKind::RhoZero &&
        snaps[e].target_agents[static_cast<std::size_t>(record.events[e].target)].empty())
      ++count;
  return count;
}

}  // namespace persimon
