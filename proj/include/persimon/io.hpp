#pragma once

// Scenario and parameter files (JSON) and the CSV/JSON artifacts written by
// the command-line tool. Numbers are written in shortest round-trip form
// with '.' as the decimal separator regardless of locale.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "persimon/control.hpp"
#include "persimon/infoplane.hpp"
#include "persimon/model.hpp"
#include "persimon/optimizer.hpp"
#include "persimon/oracle.hpp"
#include "persimon/simulator.hpp"

namespace persimon {

inline constexpr int kSchemaVersion = 1;

struct ScenarioFile {
  Scenario scenario;
  std::vector<AgentParams> params;  // theta0 / w0 per agent
  OptimizerConfig optimizer;
};

/// Parse and validate. Syntax errors report line and column; semantic errors
/// name the JSON path of the offending field. Throws ValidationError.
ScenarioFile parse_scenario(const std::string& text);
ScenarioFile load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const ScenarioFile& file);

/// {"schema_version": 1, "agents": [{"theta": [...], "w": [...]}]}
std::vector<AgentParams> parse_params(const std::string& text, const Scenario& scenario);
std::vector<AgentParams> load_params(const std::filesystem::path& path, const Scenario& scenario);
std::string params_to_json(const std::vector<AgentParams>& params);

/// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

void write_trajectory_csv(std::ostream& os, const SimRecord& record);
void write_events_csv(std::ostream& os, const std::vector<EventRecord>& events);
void write_filtered_events_csv(std::ostream& os, const std::vector<FilteredEvent>& events);
void write_cost_history_csv(std::ostream& os, const OptRun& run);
std::string fd_report_to_json(const FdReport& report, const GradCheckOptions& options);
void write_fd_table(std::ostream& os, const FdReport& report);

/// Write `content` to `path`, creating parent directories. Throws std::runtime_error.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace persimon
