// persimon: simulate | optimize | gradcheck
//
// Exit codes: 0 success, 1 runtime failure (or failed gradient check),
// 2 invalid input.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "persimon/infoplane.hpp"
#include "persimon/io.hpp"
#include "persimon/ipa.hpp"
#include "persimon/optimizer.hpp"
#include "persimon/oracle.hpp"
#include "persimon/simulator.hpp"

namespace fs = std::filesystem;
using namespace persimon;
using ordered = nlohmann::ordered_json;

namespace {

struct CommonArgs {
  std::string scenario;
  std::string out = "out";
  std::string params;
  std::string mode;
  std::optional<long> seed;  // reserved; nothing in the pipeline is random
  bool timing = false;
};

struct Loaded {
  ScenarioFile file;
  std::vector<AgentParams> params;
};

Loaded load(const CommonArgs& args) {
  Loaded l{load_scenario(args.scenario), {}};
  if (!args.mode.empty()) {
    l.file.scenario.mode = info_mode_from_string(args.mode);
    l.file.optimizer.mode = l.file.scenario.mode;
  }
  l.params = args.params.empty() ? l.file.params : load_params(args.params, l.file.scenario);
  return l;
}

std::string to_csv(void (*writer)(std::ostream&, const SimRecord&), const SimRecord& rec) {
  std::ostringstream os;
  writer(os, rec);
  return os.str();
}

ordered event_counts_json(const SimRecord& rec) {
  ordered counts;
  const auto c = rec.event_counts();
  for (int k = 0; k < kNumEventKinds; ++k) counts[to_string(static_cast<EventKind>(k))] = c[static_cast<std::size_t>(k)];
  return counts;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_simulate(const CommonArgs& args) {
  const auto start = std::chrono::steady_clock::now();
  const Loaded in = load(args);
  const Scenario& sc = in.file.scenario;
  const SimRecord rec = simulate(sc, in.params);
  const fs::path out = args.out;
  write_file(out / "trajectory.csv", to_csv(write_trajectory_csv, rec));
  std::ostringstream ev;
  write_events_csv(ev, rec.events);
  write_file(out / "events.csv", ev.str());

  ordered summary;
  summary["schema_version"] = kSchemaVersion;
  summary["command"] = "simulate";
  summary["mode"] = to_string(sc.mode);
  summary["J"] = rec.cost;
  summary["num_events"] = rec.events.size();
  summary["event_counts"] = event_counts_json(rec);
  summary["warnings"] = rec.warnings;
  if (args.timing) summary["wall_time_s"] = seconds_since(start);
  write_file(out / "summary.json", summary.dump(2) + "\n");
  for (const std::string& w : rec.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "J = " << format_double(rec.cost) << "\n";
  return 0;
}

int cmd_optimize(const CommonArgs& args, std::optional<int> iters, int checkpoint_every, bool audit_events) {
  const auto start = std::chrono::steady_clock::now();
  const Loaded in = load(args);
  const Scenario& sc = in.file.scenario;
  OptimizerConfig config = in.file.optimizer;
  if (iters) config.max_iters = *iters;
  const fs::path out = args.out;

  long hold_reset_violations = 0;
  auto hook = [&](const Iterate& it, const SimRecord& rec) {
    hold_reset_violations += audit_hold_reset(sc, it.params, rec).violations;
    if (checkpoint_every > 0 && it.index % checkpoint_every == 0) {
      char name[64];
      std::snprintf(name, sizeof name, "params_iter_%04d.json", it.index);
      write_file(out / "checkpoints" / name, params_to_json(it.params));
    }
    if (audit_events) {
      const std::vector<NeighborSnapshot> snaps = event_snapshots(sc, rec);
      for (std::size_t j = 0; j < sc.agents.size(); ++j) {
        std::ostringstream os;
        write_filtered_events_csv(os, filtered_event_log({config.mode}, static_cast<int>(j), rec, snaps));
        char name[64];
        std::snprintf(name, sizeof name, "iter_%04d_agent_%zu.csv", it.index, j);
        write_file(out / "audit" / name, os.str());
      }
    }
  };
  const OptRun run = optimize(sc, in.params, config, hook);

  std::ostringstream hist;
  write_cost_history_csv(hist, run);
  write_file(out / "cost_history.csv", hist.str());
  write_file(out / "params_final.json", params_to_json(run.final_params));

  ordered summary;
  summary["schema_version"] = kSchemaVersion;
  summary["command"] = "optimize";
  summary["mode"] = to_string(config.mode);
  summary["termination"] = to_string(run.reason);
  summary["iterations"] = run.iterates.size();
  summary["J_initial"] = run.initial_cost();
  summary["J_final"] = run.final_cost();
  summary["cost_convention"] = "J recorded at each iterate before its update";
  summary["step_schedule"] = {{"a_theta", config.a_theta}, {"a_w", config.a_w}, {"eta", config.eta}};
  summary["epsilon"] = config.epsilon;
  summary["max_iters"] = config.max_iters;
  summary["hold_reset_violations"] = hold_reset_violations;
  if (args.timing) summary["wall_time_s"] = seconds_since(start);
  write_file(out / "summary.json", summary.dump(2) + "\n");
  std::cout << "J: " << format_double(run.initial_cost()) << " -> " << format_double(run.final_cost()) << " ("
            << run.iterates.size() << " iterates, " << to_string(run.reason) << ")\n";
  return 0;
}

int cmd_gradcheck(const CommonArgs& args, const GradCheckOptions& options) {
  const Loaded in = load(args);
  const FdReport report = grad_check(in.file.scenario, in.params, options);
  write_file(fs::path(args.out) / "gradcheck.json", fd_report_to_json(report, options));
  write_fd_table(std::cout, report);
  return report.ok ? 0 : 1;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--scenario", args.scenario, "scenario JSON file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out, "output directory");
  cmd->add_option("--params", args.params, "parameter JSON overriding theta0/w0")->check(CLI::ExistingFile);
  cmd->add_option("--mode", args.mode, "information mode: CENTRALIZED, ALMOST or LOCAL");
  cmd->add_option("--seed", args.seed, "reserved; accepted and ignored");
  cmd->add_flag("--timing", args.timing, "include wall time in summary.json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D multi-agent persistent monitoring: simulation, event-driven gradients, optimization"};
  app.require_subcommand(1);
  CommonArgs args;

  CLI::App* sim = app.add_subcommand("simulate", "simulate once and write trajectory, events and summary");
  add_common(sim, args);

  CLI::App* opt = app.add_subcommand("optimize", "run gradient descent on (theta, w)");
  add_common(opt, args);
  std::optional<int> iters;
  int checkpoint_every = 50;
  bool audit_events = false;
  opt->add_option("--iters", iters, "maximum iterations (overrides optimizer.max_iters)")->check(CLI::NonNegativeNumber);
  opt->add_option("--checkpoint-every", checkpoint_every, "write params every k iterations (0 disables)")
      ->check(CLI::NonNegativeNumber);
  opt->add_flag("--audit-events", audit_events, "write per-agent filtered event logs for every iteration");

  CLI::App* chk = app.add_subcommand("gradcheck", "compare event-driven gradients with finite differences");
  add_common(chk, args);
  GradCheckOptions gc;
  chk->add_option("--tol", gc.tol, "relative error tolerance per coordinate");
  chk->add_option("--threshold", gc.pass_threshold, "required pass fraction over smooth coordinates");
  chk->add_option("--corrupt-ipa-scale", gc.corrupt_ipa_scale, "negative control: scale IPA values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(args);
    if (opt->parsed()) return cmd_optimize(args, iters, checkpoint_every, audit_events);
    return cmd_gradcheck(args, gc);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
