#include "persimon/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace persimon {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void expect_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) known = known || it.key() == k;
    if (!known) fail(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
  }
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

const json& required(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail(join(path, key), "missing");
  return j.at(key);
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

double number(const json& j, const std::string& path, const char* key) {
  return number(required(j, path, key), join(path, key));
}

double number_or(const json& j, const std::string& path, const char* key, double fallback) {
  return j.contains(key) ? number(j.at(key), join(path, key)) : fallback;
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

Eigen::VectorXd vector(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k)
    out(static_cast<Eigen::Index>(k)) = number(v[k], path + "[" + std::to_string(k) + "]");
  return out;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

void check_schema(const json& root) {
  if (!root.contains("schema_version")) fail("schema_version", "missing");
  const int v = integer(root.at("schema_version"), "schema_version");
  if (v != kSchemaVersion) fail("schema_version", "unsupported version " + std::to_string(v));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ordered vec_json(const Eigen::VectorXd& v) {
  ordered a = ordered::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v(k));
  return a;
}

template <typename... Cols>
void csv_row(std::ostream& os, const Cols&... cols) {
  bool first = true;
  ((os << (first ? "" : ",") << cols, first = false), ...);
  os << '\n';
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

ScenarioFile parse_scenario(const std::string& text) {
  const json root = parse_json(text);
  expect_object(root, "(root)");
  expect_keys(root, "", {"schema_version", "mission", "targets", "agents", "r_c", "mode", "numerics", "optimizer",
                         "local_reentry_reset"});
  check_schema(root);

  ScenarioFile file;
  Scenario& sc = file.scenario;
  const json& mission = required(root, "", "mission");
  expect_object(mission, "mission");
  expect_keys(mission, "mission", {"L", "T"});
  sc.length = number(mission, "mission", "L");
  sc.horizon = number(mission, "mission", "T");

  const json& targets = required(root, "", "targets");
  if (!targets.is_array()) fail("targets", "expected an array");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const std::string at = "targets[" + std::to_string(i) + "]";
    const json& t = targets[i];
    expect_object(t, at);
    expect_keys(t, at, {"x", "A", "B", "R0"});
    sc.targets.push_back({number(t, at, "x"), number(t, at, "A"), number(t, at, "B"), number(t, at, "R0")});
  }

  const json& agents = required(root, "", "agents");
  if (!agents.is_array()) fail("agents", "expected an array");
  for (std::size_t j = 0; j < agents.size(); ++j) {
    const std::string at = "agents[" + std::to_string(j) + "]";
    const json& a = agents[j];
    expect_object(a, at);
    expect_keys(a, at, {"s0", "u0", "r", "theta0", "w0"});
    AgentSpec spec;
    spec.s0 = number(a, at, "s0");
    spec.u0 = a.contains("u0") ? integer(a.at("u0"), at + ".u0") : 0;
    spec.range = number(a, at, "r");
    sc.agents.push_back(spec);
    AgentParams p;
    p.theta = vector(required(a, at, "theta0"), at + ".theta0");
    p.dwell = vector(required(a, at, "w0"), at + ".w0");
    file.params.push_back(std::move(p));
  }

  sc.comm_range = number(root, "", "r_c");
  if (root.contains("mode")) {
    if (!root.at("mode").is_string()) fail("mode", "expected a string");
    sc.mode = info_mode_from_string(root.at("mode").get<std::string>());
  }
  if (root.contains("local_reentry_reset")) {
    if (!root.at("local_reentry_reset").is_boolean()) fail("local_reentry_reset", "expected true or false");
    sc.local_reentry_reset = root.at("local_reentry_reset").get<bool>();
  }
  if (root.contains("numerics")) {
    const json& nm = root.at("numerics");
    expect_object(nm, "numerics");
    expect_keys(nm, "numerics", {"h", "eps_event", "sample_dt"});
    sc.numerics.step = number_or(nm, "numerics", "h", sc.numerics.step);
    sc.numerics.event_tol = number_or(nm, "numerics", "eps_event", sc.numerics.event_tol);
    sc.numerics.sample_dt = number_or(nm, "numerics", "sample_dt", sc.numerics.sample_dt);
  }
  OptimizerConfig& oc = file.optimizer;
  if (root.contains("optimizer")) {
    const json& op = root.at("optimizer");
    expect_object(op, "optimizer");
    expect_keys(op, "optimizer", {"a_theta", "a_w", "eta", "epsilon", "max_iters"});
    oc.a_theta = number_or(op, "optimizer", "a_theta", oc.a_theta);
    oc.a_w = number_or(op, "optimizer", "a_w", oc.a_w);
    oc.eta = number_or(op, "optimizer", "eta", oc.eta);
    oc.epsilon = number_or(op, "optimizer", "epsilon", oc.epsilon);
    if (op.contains("max_iters")) oc.max_iters = integer(op.at("max_iters"), "optimizer.max_iters");
  }
  oc.mode = sc.mode;

  validate(sc);
  for (std::size_t j = 0; j < file.params.size(); ++j)
    validate(file.params[j], sc.length, "agents[" + std::to_string(j) + "]");
  validate(oc);
  return file;
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
  try {
    return parse_scenario(read_file(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string scenario_to_json(const ScenarioFile& file) {
  const Scenario& sc = file.scenario;
  ordered root;
  root["schema_version"] = kSchemaVersion;
  root["mission"] = {{"L", sc.length}, {"T", sc.horizon}};
  root["targets"] = ordered::array();
  for (const Target& t : sc.targets)
    root["targets"].push_back({{"x", t.x}, {"A", t.growth}, {"B", t.decay}, {"R0", t.r0}});
  root["agents"] = ordered::array();
  for (std::size_t j = 0; j < sc.agents.size(); ++j) {
    const AgentSpec& a = sc.agents[j];
    root["agents"].push_back({{"s0", a.s0},
                              {"u0", a.u0},
                              {"r", a.range},
                              {"theta0", vec_json(file.params.at(j).theta)},
                              {"w0", vec_json(file.params.at(j).dwell)}});
  }
  root["r_c"] = sc.comm_range;
  root["mode"] = to_string(sc.mode);
  root["local_reentry_reset"] = sc.local_reentry_reset;
  root["numerics"] = {{"h", sc.numerics.step}, {"eps_event", sc.numerics.event_tol},
                      {"sample_dt", sc.numerics.sample_dt}};
  const OptimizerConfig& oc = file.optimizer;
  root["optimizer"] = {{"a_theta", oc.a_theta}, {"a_w", oc.a_w}, {"eta", oc.eta},
                       {"epsilon", oc.epsilon}, {"max_iters", oc.max_iters}};
  return root.dump(2) + "\n";
}

std::vector<AgentParams> parse_params(const std::string& text, const Scenario& sc) {
  const json root = parse_json(text);
  expect_object(root, "(root)");
  expect_keys(root, "", {"schema_version", "agents"});
  check_schema(root);
  const json& agents = required(root, "", "agents");
  if (!agents.is_array()) fail("agents", "expected an array");
  if (agents.size() != sc.agents.size())
    fail("agents", "expected " + std::to_string(sc.agents.size()) + " entries, got " + std::to_string(agents.size()));
  std::vector<AgentParams> out;
  for (std::size_t j = 0; j < agents.size(); ++j) {
    const std::string at = "agents[" + std::to_string(j) + "]";
    expect_object(agents[j], at);
    expect_keys(agents[j], at, {"theta", "w"});
    AgentParams p;
    p.theta = vector(required(agents[j], at, "theta"), at + ".theta");
    p.dwell = vector(required(agents[j], at, "w"), at + ".w");
    validate(p, sc.length, at);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<AgentParams> load_params(const std::filesystem::path& path, const Scenario& sc) {
  try {
    return parse_params(read_file(path), sc);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string params_to_json(const std::vector<AgentParams>& params) {
  ordered root;
  root["schema_version"] = kSchemaVersion;
  root["agents"] = ordered::array();
  for (const AgentParams& p : params) root["agents"].push_back({{"theta", vec_json(p.theta)}, {"w", vec_json(p.dwell)}});
  return root.dump(2) + "\n";
}

void write_trajectory_csv(std::ostream& os, const SimRecord& record) {
  if (record.samples.empty()) {
    os << "t\n";
    return;
  }
  const Sample& first = record.samples.front();
  os << 't';
  for (Eigen::Index j = 0; j < first.s.size(); ++j) os << ",s_" << j;
  for (Eigen::Index j = 0; j < first.u.size(); ++j) os << ",u_" << j;
  for (Eigen::Index i = 0; i < first.r.size(); ++i) os << ",R_" << i;
  for (Eigen::Index i = 0; i < first.p.size(); ++i) os << ",P_" << i;
  os << '\n';
  for (const Sample& smp : record.samples) {
    os << format_double(smp.t);
    for (Eigen::Index j = 0; j < smp.s.size(); ++j) os << ',' << format_double(smp.s(j));
    for (Eigen::Index j = 0; j < smp.u.size(); ++j) os << ',' << smp.u(j);
    for (Eigen::Index i = 0; i < smp.r.size(); ++i) os << ',' << format_double(smp.r(i));
    for (Eigen::Index i = 0; i < smp.p.size(); ++i) os << ',' << format_double(smp.p(i));
    os << '\n';
  }
}

void write_events_csv(std::ostream& os, const std::vector<EventRecord>& events) {
  os << "time,kind,agent,target,payload\n";
  for (const EventRecord& e : events) csv_row(os, format_double(e.time), to_string(e.kind), e.agent, e.target, e.payload);
}

void write_filtered_events_csv(std::ostream& os, const std::vector<FilteredEvent>& events) {
  os << "time,kind,agent,target,payload,visibility\n";
  for (const FilteredEvent& f : events) {
    const EventRecord& e = f.event;
    csv_row(os, format_double(e.time), to_string(e.kind), e.agent, e.target, e.payload, to_string(f.visibility));
  }
}

void write_cost_history_csv(std::ostream& os, const OptRun& run) {
  os << "iteration,J";
  const std::size_t n = run.iterates.empty() ? 0 : run.iterates.front().grad_norms.size();
  for (std::size_t j = 0; j < n; ++j) os << ",grad_norm_" << j;
  os << '\n';
  for (const Iterate& it : run.iterates) {
    os << it.index << ',' << format_double(it.cost);
    for (const double g : it.grad_norms) os << ',' << format_double(g);
    os << '\n';
  }
}

std::string fd_report_to_json(const FdReport& report, const GradCheckOptions& opt) {
  ordered root;
  root["schema_version"] = kSchemaVersion;
  root["tol"] = opt.tol;
  root["deltas"] = {opt.fine_delta, opt.coarse_delta};
  root["rel_floor"] = opt.rel_floor;
  root["smooth_agreement"] = opt.smooth_agreement;
  root["kink_agreement"] = opt.kink_agreement;
  root["pass_threshold"] = opt.pass_threshold;
  root["smooth"] = report.smooth;
  root["passed"] = report.passed;
  root["skipped"] = report.skipped;
  root["pass_rate"] = report.pass_rate;
  root["ok"] = report.ok;
  root["coordinates"] = ordered::array();
  for (const FdEntry& e : report.entries) {
    ordered c;
    c["name"] = e.coord.name();
    c["agent"] = e.coord.agent;
    c["param"] = e.coord.dwell ? "w" : "theta";
    c["index"] = e.coord.index;
    c["skipped"] = e.skipped;
    if (!e.skipped) {
      c["ipa"] = e.ipa;
      c["fd"] = {e.fd_fine, e.fd_coarse};
      c["one_sided"] = {e.forward, e.backward};
      c["rel_error"] = e.rel_error;
      c["smooth"] = e.smooth;
      c["pass"] = e.pass;
    }
    root["coordinates"].push_back(std::move(c));
  }
  return root.dump(2) + "\n";
}

void write_fd_table(std::ostream& os, const FdReport& report) {
  char line[160];
  std::snprintf(line, sizeof line, "%-18s %14s %14s %14s %10s %s\n", "coordinate", "ipa", "fd(fine)", "fd(coarse)",
                "rel_err", "status");
  os << line;
  for (const FdEntry& e : report.entries) {
    if (e.skipped) {
      std::snprintf(line, sizeof line, "%-18s %14s %14s %14s %10s %s\n", e.coord.name().c_str(), "-", "-", "-", "-",
                    "skipped");
    } else {
      const char* status = !e.smooth ? "non-smooth" : e.pass ? "ok" : "FAIL";
      std::snprintf(line, sizeof line, "%-18s % 14.6e % 14.6e % 14.6e %10.2e %s\n", e.coord.name().c_str(), e.ipa,
                    e.fd_fine, e.fd_coarse, e.rel_error, status);
    }
    os << line;
  }
  std::snprintf(line, sizeof line, "smooth %d, passed %d, skipped %d, pass rate %.4f -> %s\n", report.smooth,
                report.passed, report.skipped, report.pass_rate, report.ok ? "PASS" : "FAIL");
  os << line;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << content;
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace persimon
