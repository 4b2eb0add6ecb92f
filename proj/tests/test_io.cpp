#include <sstream>

#include "doctest.h"
#include "persimon/io.hpp"
#include "support.hpp"

using namespace persimon;

namespace {

const char* kScenario = R"({
  "schema_version": 1,
  "mission": {"L": 20, "T": 5},
  "targets": [{"x": 10, "A": 1, "B": 5, "R0": 1}, {"x": 4, "A": 0.5, "B": 2, "R0": 0}],
  "agents": [{"s0": 2, "u0": 1, "r": 3, "theta0": [12, 6], "w0": [0.5, 1]}],
  "r_c": 6,
  "mode": "LOCAL",
  "numerics": {"h": 0.002},
  "optimizer": {"max_iters": 7}
})";

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  s.replace(s.find(from), from.size(), to);
  return s;
}

}  // namespace

TEST_CASE("scenario files parse with defaults") {
  const ScenarioFile f = parse_scenario(kScenario);
  CHECK(f.scenario.targets.size() == 2);
  CHECK(f.scenario.targets[1].growth == 0.5);
  CHECK(f.scenario.mode == InfoMode::Local);
  CHECK(f.optimizer.mode == InfoMode::Local);
  CHECK(f.scenario.numerics.step == 0.002);
  CHECK(f.scenario.numerics.event_tol == 1e-9);
  CHECK(f.optimizer.max_iters == 7);
  CHECK(f.optimizer.a_theta == 0.2);
  CHECK(f.params[0].theta(1) == 6);
}

TEST_CASE("scenario files round-trip") {
  const ScenarioFile f = parse_scenario(kScenario);
  const ScenarioFile g = parse_scenario(scenario_to_json(f));
  CHECK(scenario_to_json(g) == scenario_to_json(f));
  CHECK(g.params == f.params);
}

TEST_CASE("malformed scenarios name the problem") {
  CHECK(error_of(replace(kScenario, "\"B\": 5", "\"B\": 0.5")).find("targets[0].B") != std::string::npos);
  CHECK(error_of(replace(kScenario, "\"r\": 3", "\"r\": \"3\"")).find("agents[0].r") != std::string::npos);
  CHECK(error_of(replace(kScenario, "\"w0\": [0.5, 1]", "\"w0\": [0.5]")).find("agents[0]") != std::string::npos);
  CHECK(error_of(replace(kScenario, "\"r_c\"", "\"rc\"")).find("rc") != std::string::npos);
  CHECK(error_of(replace(kScenario, "LOCAL", "NONE")).find("NONE") != std::string::npos);
  CHECK(error_of(replace(kScenario, "\"schema_version\": 1", "\"schema_version\": 9")).find("schema_version") !=
        std::string::npos);
  const std::string syntax = error_of(replace(kScenario, "\"r_c\": 6,", "\"r_c\": 6"));
  CHECK(syntax.find("line") != std::string::npos);
}

TEST_CASE("parameter files") {
  const ScenarioFile f = parse_scenario(kScenario);
  const std::string text = params_to_json(f.params);
  CHECK(parse_params(text, f.scenario) == f.params);
  CHECK_THROWS_AS(parse_params(R"({"schema_version": 1, "agents": []})", f.scenario), ValidationError);
  CHECK_THROWS_AS(parse_params(R"({"schema_version": 1, "agents": [{"theta": [30], "w": [0]}]})", f.scenario),
                  ValidationError);
}

TEST_CASE("doubles are written in shortest round-trip form") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-9) == "1e-09");
  CHECK(format_double(37.0) == "37");
  const double v = 0.1 + 0.2;
  CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("csv outputs") {
  const ScenarioFile f = parse_scenario(kScenario);
  const SimRecord rec = simulate(f.scenario, f.params);
  std::ostringstream traj;
  write_trajectory_csv(traj, rec);
  std::string header;
  std::istringstream in(traj.str());
  std::getline(in, header);
  CHECK(header == "t,s_0,u_0,R_0,R_1,P_0,P_1");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == static_cast<int>(rec.samples.size()));
  CHECK(rows == 51);

  std::ostringstream ev;
  write_events_csv(ev, rec.events);
  CHECK(ev.str().rfind("time,kind,agent,target,payload\n", 0) == 0);
  CHECK(ev.str().find("horizon") != std::string::npos);
}
