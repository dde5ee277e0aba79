#include "dbarlab/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dbarlab/io.hpp"

namespace dbarlab {

const char* to_string(Task t) {
  switch (t) {
    case Task::obstacle: return "obstacle";
    case Task::contacts: return "contacts";
    case Task::spectrum: return "spectrum";
    case Task::weyl: return "weyl";
    case Task::thin_band: return "thin-band";
    case Task::large_tau: return "large-tau";
    case Task::decay: return "decay";
    case Task::oracle_compare: return "oracle-compare";
    case Task::validate: return "validate";
  }
  return "?";
}

Task task_from_string(const std::string& name) {
  for (Task t : {Task::obstacle, Task::contacts, Task::spectrum, Task::weyl,
                 Task::thin_band, Task::large_tau, Task::decay,
                 Task::oracle_compare, Task::validate})
    if (name == to_string(t)) return t;
  throw Error("unknown task '" + name + "'");
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_double_list(const std::string& s,
                                      const std::string& key) {
  std::vector<double> out;
  std::istringstream in(s);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    cell = trim(cell);
    if (cell.empty()) continue;
    try {
      size_t used = 0;
      out.push_back(std::stod(cell, &used));
      require(used == cell.size(), "");
    } catch (...) {
      throw Error("config key '" + key + "': bad number '" + cell + "'");
    }
  }
  return out;
}

double parse_double(const std::string& s, const std::string& key) {
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    require(used == s.size(), "");
    return v;
  } catch (...) {
    throw Error("config key '" + key + "': bad number '" + s + "'");
  }
}

int parse_int(const std::string& s, const std::string& key) {
  try {
    size_t used = 0;
    int v = std::stoi(s, &used);
    require(used == s.size(), "");
    return v;
  } catch (...) {
    throw Error("config key '" + key + "': bad integer '" + s + "'");
  }
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "weight.name",          "weight.sigma",
      "weight.amplitude",     "weight.center_x",
      "weight.center_y",      "weight.source_csv",
      "grid.nx",              "grid.ny",
      "obstacle.method",      "obstacle.tol",
      "obstacle.omega",       "obstacle.max_iter",
      "obstacle.eps_schedule", "obstacle.damping",
      "task.tau",             "task.h_list",
      "task.tau_list",        "task.delta",
      "task.radius",          "task.k_max",
      "task.lowest",          "run.output_dir",
      "run.workers",          "spectrum.dense_cap",
      "spectrum.dump_csv",
  };
  return keys;
}

}  // namespace

std::map<std::string, std::string> parse_config_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open config file " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    require(eq != std::string::npos,
            path.string() + ":" + std::to_string(lineno) +
                ": expected 'key = value', got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    require(!key.empty(), path.string() + ":" + std::to_string(lineno) +
                              ": empty key");
    kv[key] = value;
  }
  return kv;
}

void apply_overrides(std::map<std::string, std::string>& kv,
                     const std::vector<std::string>& overrides) {
  for (const std::string& item : overrides) {
    size_t eq = item.find('=');
    require(eq != std::string::npos,
            "override '" + item + "' must look like key=value");
    kv[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
  }
}

RunConfig make_run_config(Task task,
                          const std::map<std::string, std::string>& kv) {
  RunConfig cfg;
  cfg.task = task;
  if (const char* env = std::getenv("DBARLAB_OUT"))
    cfg.output_dir = env;
  else
    cfg.output_dir = "out";

  for (const auto& [key, value] : kv) {
    const auto& keys = known_keys();
    require(std::find(keys.begin(), keys.end(), key) != keys.end(),
            "unknown config key '" + key + "'");
    if (key == "weight.name") cfg.weight_name = value;
    else if (key == "weight.sigma")
      cfg.weight_params["sigma"] = parse_double(value, key);
    else if (key == "weight.amplitude")
      cfg.weight_params["amplitude"] = parse_double(value, key);
    else if (key == "weight.center_x")
      cfg.weight_params["center_x"] = parse_double(value, key);
    else if (key == "weight.center_y")
      cfg.weight_params["center_y"] = parse_double(value, key);
    else if (key == "weight.source_csv") cfg.weight_source_csv = value;
    else if (key == "grid.nx") cfg.nx = parse_int(value, key);
    else if (key == "grid.ny") cfg.ny = parse_int(value, key);
    else if (key == "obstacle.method") cfg.method = value;
    else if (key == "obstacle.tol") {
      cfg.psor.tol = parse_double(value, key);
      cfg.penalty.tol = cfg.psor.tol;
    } else if (key == "obstacle.omega")
      cfg.psor.omega = parse_double(value, key);
    else if (key == "obstacle.max_iter") {
      cfg.psor.max_iter = parse_int(value, key);
      cfg.penalty.max_iter = cfg.psor.max_iter;
    } else if (key == "obstacle.eps_schedule")
      cfg.penalty.schedule = parse_double_list(value, key);
    else if (key == "obstacle.damping")
      cfg.penalty.damping = parse_double(value, key);
    else if (key == "task.tau") cfg.tau = parse_double(value, key);
    else if (key == "task.h_list") cfg.h_list = parse_double_list(value, key);
    else if (key == "task.tau_list")
      cfg.tau_list = parse_double_list(value, key);
    else if (key == "task.delta") cfg.delta = parse_double(value, key);
    else if (key == "task.radius") cfg.radius = parse_double(value, key);
    else if (key == "task.k_max") cfg.k_max = parse_int(value, key);
    else if (key == "task.lowest") cfg.lowest = parse_int(value, key);
    else if (key == "run.output_dir") cfg.output_dir = value;
    else if (key == "run.workers") cfg.workers = parse_int(value, key);
    else if (key == "spectrum.dense_cap")
      cfg.dense_cap = parse_int(value, key);
    else if (key == "spectrum.dump_csv")
      cfg.dump_spectrum_csv = parse_int(value, key) != 0;
  }
  cfg.echo = kv;
  cfg.echo["task"] = to_string(task);

  require(cfg.method == "psor" || cfg.method == "penalized",
          "obstacle.method must be psor or penalized");
  if (!cfg.penalty.schedule.empty())
    cfg.penalty.epsilon = cfg.penalty.schedule.back();
  return cfg;
}

Weight build_weight(const RunConfig& cfg) {
  TorusGrid grid = make_grid(cfg.nx, cfg.ny);
  std::optional<ScalarField> source;
  if (cfg.weight_name == "custom-poisson") {
    require(!cfg.weight_source_csv.empty(),
            "custom-poisson needs weight.source_csv");
    source = load_scalar_csv(cfg.weight_source_csv);
  }
  return weight_from_catalog(cfg.weight_name, cfg.weight_params, grid, source);
}

ValidationReport validate_config(const RunConfig& cfg) {
  ValidationReport rep;
  auto note = [&](const std::string& msg) { rep.diagnostics.push_back(msg); };

  int dim = cfg.nx * cfg.ny;
  bool needs_spectrum =
      cfg.task == Task::spectrum || cfg.task == Task::weyl ||
      cfg.task == Task::large_tau || cfg.task == Task::decay ||
      cfg.task == Task::oracle_compare || cfg.task == Task::validate;
  if (needs_spectrum && dim > cfg.dense_cap)
    note("dense cap: operator dimension " + std::to_string(dim) + " exceeds " +
         std::to_string(cfg.dense_cap) + " (applies to spectrum tasks)");
  for (double h : cfg.h_list) {
    if (h <= 0.0) {
      note("nonpositive h in task.h_list");
      continue;
    }
    if (needs_spectrum && cfg.tau / h > kTauOverHMax)
      note("precision floor: tau/h = " + format_double(cfg.tau / h) +
           " > " + format_double(kTauOverHMax) + " at h = " +
           format_double(h) + "; increase h or use smaller tau");
  }

  double osc = 0.0;
  std::string routing;
  try {
    Weight w = build_weight(cfg);
    osc = w.osc;
    if (cfg.task == Task::weyl && cfg.tau >= osc)
      note("tau = " + format_double(cfg.tau) +
           " >= oscillation = " + format_double(osc) +
           ": the weyl task needs tau < osc (route to large-tau)");
    if (cfg.task == Task::large_tau && cfg.tau <= osc)
      note("tau = " + format_double(cfg.tau) +
           " <= oscillation = " + format_double(osc) +
           ": the large-tau check needs tau > osc strictly");
    routing = cfg.tau < osc ? "weyl regime (tau < osc)"
                            : "large-tau regime (tau > osc)";
  } catch (const std::exception& e) {
    note(std::string("weight construction failed: ") + e.what());
  }

  int jobs = static_cast<int>(std::max<size_t>(
      {cfg.h_list.size(), cfg.tau_list.size(), size_t{1}}));
  double mem_gb = needs_spectrum
                      ? 3.0 * 16.0 * double(dim) * double(dim) / 1e9
                      : 16.0 * double(dim) / 1e9;
  char mem[32];
  std::snprintf(mem, sizeof mem, "%.3g", mem_gb);
  std::ostringstream plan;
  plan << "plan: task " << to_string(cfg.task) << ", weight "
       << cfg.weight_name << " on " << cfg.nx << "x" << cfg.ny
       << " (oscillation " << format_double(osc) << ", " << routing << "), "
       << jobs << " jobs, est. memory " << mem << " GB";
  rep.plan = plan.str();
  return rep;
}

}  // namespace dbarlab
