#include "persimon/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>
#include <utility>

#include "persimon/ipa.hpp"
#include "persimon/simulator.hpp"

namespace persimon {

namespace {

double& entry(std::vector<AgentParams>& params, const Coordinate& c) {
  AgentParams& p = params.at(static_cast<std::size_t>(c.agent));
  return c.dwell ? p.dwell(c.index) : p.theta(c.index);
}

bool feasible(const Scenario& sc, const Coordinate& c, double v) {
  return c.dwell ? v >= 0.0 : (v >= 0.0 && v <= sc.length);
}

// Runs fn(k) for k in [0, count) on up to worker_threads() threads.
template <typename Fn>
void parallel_for(std::size_t count, Fn fn) {
  const std::size_t workers = std::min<std::size_t>(worker_threads(), count);
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t k = next++; k < count; k = next++) fn(k);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

// (J(p + delta e), J(p - delta e)), or nullopt when either leaves the feasible box.
std::optional<std::pair<double, double>> perturbed_costs(const Scenario& sc, const std::vector<AgentParams>& params,
                                                         const Coordinate& c, double delta) {
  std::vector<AgentParams> plus = params;
  std::vector<AgentParams> minus = params;
  entry(plus, c) += delta;
  entry(minus, c) -= delta;
  if (!feasible(sc, c, entry(plus, c)) || !feasible(sc, c, entry(minus, c))) return std::nullopt;
  const SimOptions quiet{.record_samples = false};
  return std::pair{cost(simulate(sc, plus, quiet)), cost(simulate(sc, minus, quiet))};
}

bool agree(double a, double b, double relative, double floor) {
  return std::abs(a - b) <= relative * std::max(std::abs(a), std::abs(b)) + floor;
}

}  // namespace

std::string Coordinate::name() const {
  return "agent" + std::to_string(agent) + (dwell ? ".w[" : ".theta[") + std::to_string(index) + "]";
}

std::vector<Coordinate> all_coordinates(const std::vector<AgentParams>& params) {
  std::vector<Coordinate> out;
  for (std::size_t j = 0; j < params.size(); ++j)
    for (const bool dwell : {false, true})
      for (int l = 0; l < params[j].size(); ++l) out.push_back({static_cast<int>(j), dwell, l});
  return out;
}

unsigned worker_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PERSIMON_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

std::optional<double> fd_gradient(const Scenario& sc, const std::vector<AgentParams>& params,
                                  const Coordinate& c, double delta) {
  const std::optional<std::pair<double, double>> j = perturbed_costs(sc, params, c, delta);
  if (!j) return std::nullopt;
  return (j->first - j->second) / (2.0 * delta);
}

FdReport grad_check(const Scenario& sc, const std::vector<AgentParams>& params, const GradCheckOptions& opt) {
  const SimRecord base = simulate(sc, params, SimOptions{.record_samples = false});
  const GradientVector ipa = ipa_gradient(sc, params, base);
  const double j0 = cost(base);
  const std::vector<Coordinate> coords = all_coordinates(params);

  FdReport report;
  report.entries.resize(coords.size());
  parallel_for(coords.size(), [&](std::size_t k) {
    const Coordinate& c = coords[k];
    FdEntry& e = report.entries[k];
    e.coord = c;
    const AgentGradient& g = ipa[static_cast<std::size_t>(c.agent)];
    e.ipa = opt.corrupt_ipa_scale * (c.dwell ? g.w(c.index) : g.theta(c.index));
    const auto fine = perturbed_costs(sc, params, c, opt.fine_delta);
    const auto coarse = perturbed_costs(sc, params, c, opt.coarse_delta);
    if (!fine || !coarse) {
      e.skipped = true;
      return;
    }
    e.fd_fine = (fine->first - fine->second) / (2.0 * opt.fine_delta);
    e.fd_coarse = (coarse->first - coarse->second) / (2.0 * opt.coarse_delta);
    e.forward = (fine->first - j0) / opt.fine_delta;
    e.backward = (j0 - fine->second) / opt.fine_delta;
    // a kink of J at p itself leaves the central values consistent across deltas
    // (both report the mean slope); the one-sided values expose it
    e.smooth = agree(e.fd_fine, e.fd_coarse, opt.smooth_agreement, opt.rel_floor) &&
               agree(e.forward, e.backward, opt.kink_agreement, opt.rel_floor);
    e.rel_error = std::abs(e.ipa - e.fd_fine) / std::max(std::abs(e.fd_fine), opt.rel_floor);
    e.pass = e.smooth && e.rel_error <= opt.tol;
  });

  for (const FdEntry& e : report.entries) {
    report.skipped += e.skipped ? 1 : 0;
    report.smooth += e.smooth ? 1 : 0;
    report.passed += e.pass ? 1 : 0;
  }
  report.pass_rate = report.smooth == 0 ? 1.0 : static_cast<double>(report.passed) / report.smooth;
  report.ok = report.pass_rate >= opt.pass_threshold;
  return report;
}

}  // namespace persimon
