// dbarlab: batch CLI for the weighted semiclassical dbar laboratory.
//
// Subcommands run one pipeline stage each and write JSON/CSV artifacts plus a
// manifest into the output directory. Exit codes: 0 success, 2 an
// assertion-style check failed (large-tau count != 1, oracle disagreement),
// 1 configuration or runtime error.

#include <chrono>
#include <iostream>

#include "CLI11.hpp"
#include "dbarlab/config.hpp"
#include "dbarlab/io.hpp"
#include "json.hpp"

namespace {

using namespace dbarlab;
namespace fs = std::filesystem;

struct CommonArgs {
  std::string config_file;
  std::vector<std::string> sets;
  std::string output_dir;
  std::string weight;
  std::string grid;
  std::string method;
  double tau = std::numeric_limits<double>::quiet_NaN();
  std::string h_list;
  std::string tau_list;
  int workers = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_file,
                  "Config file with 'key = value' lines");
  cmd->add_option("--set", args.sets,
                  "Override a config key, e.g. --set obstacle.tol=1e-9")
      ->take_all();
  cmd->add_option("-o,--output", args.output_dir, "Output directory");
  cmd->add_option("--weight", args.weight,
                  "Weight catalog name (siny, bump, custom-poisson)");
  cmd->add_option("--grid", args.grid, "Grid size as NXxNY, e.g. 64x64");
  cmd->add_option("--method", args.method, "Obstacle solver: psor|penalized");
  cmd->add_option("--tau", args.tau, "Decay rate tau");
  cmd->add_option("--h-list", args.h_list, "Comma-separated h values");
  cmd->add_option("--tau-list", args.tau_list, "Comma-separated tau values");
  cmd->add_option("--workers", args.workers, "Worker threads for job queues");
}

RunConfig resolve(Task task, const CommonArgs& args) {
  std::map<std::string, std::string> kv;
  if (!args.config_file.empty()) kv = parse_config_file(args.config_file);
  apply_overrides(kv, args.sets);
  if (!args.output_dir.empty()) kv["run.output_dir"] = args.output_dir;
  if (!args.weight.empty()) kv["weight.name"] = args.weight;
  if (!args.grid.empty()) {
    size_t x = args.grid.find('x');
    require(x != std::string::npos, "--grid expects NXxNY, e.g. 64x64");
    kv["grid.nx"] = args.grid.substr(0, x);
    kv["grid.ny"] = args.grid.substr(x + 1);
  }
  if (!args.method.empty()) kv["obstacle.method"] = args.method;
  if (!std::isnan(args.tau)) kv["task.tau"] = format_double(args.tau);
  if (!args.h_list.empty()) kv["task.h_list"] = args.h_list;
  if (!args.tau_list.empty()) kv["task.tau_list"] = args.tau_list;
  if (args.workers > 0) kv["run.workers"] = std::to_string(args.workers);
  return make_run_config(task, kv);
}

HarnessOptions harness_options(const RunConfig& cfg) {
  HarnessOptions opt;
  opt.psor = cfg.psor;
  opt.contact_delta = cfg.delta;
  opt.workers = cfg.workers;
  opt.dense_cap = cfg.dense_cap;
  return opt;
}

ObstacleSolution solve_configured(const RunConfig& cfg, const Weight& w) {
  if (cfg.method == "penalized") return solve_penalized(w, cfg.tau, cfg.penalty);
  return solve_psor(w, cfg.tau, cfg.psor);
}

double contact_delta_for(const RunConfig& cfg, const Weight& w,
                         const ObstacleSolution& sol) {
  if (cfg.delta > 0.0) return cfg.delta;
  if (sol.method == ObstacleMethod::psor)
    return std::max(10.0 * cfg.psor.tol, 1e-12);
  return default_contact_delta(w, sol.box_tol);
}

struct Manifest {
  const RunConfig& cfg;
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  std::vector<std::string> artifacts;

  fs::path emit(const fs::path& dir) {
    nlohmann::ordered_json doc;
    doc["tool"] = "dbarlab";
    doc["version"] = "0.1.0";
    doc["task"] = to_string(cfg.task);
    nlohmann::ordered_json echo = nlohmann::ordered_json::object();
    for (const auto& [k, v] : cfg.echo) echo[k] = v;
    doc["config"] = echo;
    doc["artifacts"] = artifacts;
    doc["wall_seconds"] = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - start)
                              .count();
    doc["generated_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
    fs::path p = dir / "manifest.json";
    write_text_file(p, doc.dump(2) + "\n");
    return p;
  }
};

fs::path prepare_output(const RunConfig& cfg) {
  fs::create_directories(cfg.output_dir);
  return cfg.output_dir;
}

int run_obstacle(const RunConfig& cfg) {
  Manifest manifest{cfg};
  fs::path dir = prepare_output(cfg);
  Weight w = build_weight(cfg);
  ObstacleSolution sol = solve_configured(cfg, w);
  dump_scalar_csv(dir / "psi.csv", sol.psi);
  write_text_file(dir / "psi.json", obstacle_sidecar_json(sol));
  manifest.artifacts = {"psi.csv", "psi.json"};
  manifest.emit(dir);
  std::cout << "obstacle: method " << to_string(sol.method) << ", "
            << sol.iterations << " iterations, complementarity residual "
            << format_double(sol.residual) << "\n";
  return 0;
}

int run_contacts(const RunConfig& cfg) {
  Manifest manifest{cfg};
  fs::path dir = prepare_output(cfg);
  Weight w = build_weight(cfg);
  ObstacleSolution sol = solve_configured(cfg, w);
  ContactSets cs = extract_contact_sets(sol, w, contact_delta_for(cfg, w, sol));
  auto [v_plus, v_minus] = contact_volumes(cs, w);
  StructureReport rep = assert_structure(cs, w);
  dump_mask_csv(dir / "m_plus.csv", cs.grid, cs.m_plus);
  dump_mask_csv(dir / "m_minus.csv", cs.grid, cs.m_minus);
  write_text_file(dir / "m_plus_runs.json",
                  mask_runlength_json(cs.grid, cs.m_plus));
  write_text_file(dir / "m_minus_runs.json",
                  mask_runlength_json(cs.grid, cs.m_minus));
  write_text_file(dir / "structure.json",
                  structure_report_json(rep, cs, v_plus, v_minus));
  manifest.artifacts = {"m_plus.csv", "m_minus.csv", "m_plus_runs.json",
                        "m_minus_runs.json", "structure.json"};
  manifest.emit(dir);
  std::cout << "contacts: v_plus " << format_double(v_plus) << ", v_minus "
            << format_double(v_minus) << ", fb cells " << cs.fb_cell_count
            << "\n";
  return 0;
}

int run_spectrum(const RunConfig& cfg) {
  Manifest manifest{cfg};
  fs::path dir = prepare_output(cfg);
  Weight w = build_weight(cfg);
  require(!cfg.h_list.empty(), "spectrum task needs task.h_list");
  const double h = cfg.h_list.front();
  require(cfg.tau / h <= kTauOverHMax,
          "precision floor: tau/h = " + format_double(cfg.tau / h) +
              " > " + format_double(kTauOverHMax) +
              "; increase h or use smaller tau");
  OperatorMatrix m = assemble(w, h);
  SpectrumResult spec = singular_values(m, cfg.dense_cap);
  spec.tau_ref = cfg.tau;
  count_below(spec, std::exp(-cfg.tau / h));
  write_text_file(dir / "spectrum.json", spectrum_json(spec));
  manifest.artifacts = {"spectrum.json"};
  if (cfg.dump_spectrum_csv) {
    dump_spectrum_csv(dir / "spectrum.csv", spec);
    manifest.artifacts.push_back("spectrum.csv");
  }
  manifest.emit(dir);
  std::cout << "spectrum: h " << format_double(h) << ", "
            << spec.svals.size() << " singular values, N(e^{-tau/h}) = "
            << spec.n_below.begin()->second << "\n";
  return 0;
}

int run_weyl_task(const RunConfig& cfg) {
  Manifest manifest{cfg};
  fs::path dir = prepare_output(cfg);
  Weight w = build_weight(cfg);
  auto reports = run_weyl(w, cfg.tau, cfg.h_list, harness_options(cfg));
  write_text_file(dir / "weyl.json", weyl_reports_json(reports));
  dump_weyl_csv(dir / "weyl.csv", cfg.weight_name, reports);
  manifest.artifacts = {"weyl.json", "weyl.csv"};
  manifest.emit(dir);
  for (const auto& r : reports)
    std::cout << "weyl: h " << format_double(r.h) << ", N " << r.n_observed
              << ", prediction " << format_double(r.weyl_prediction)
              << ", ratio " << format_double(r.ratio) << "\n";
  return 0;
}

int run_thin_band(const RunConfig& cfg) {
  Manifest manifest{cfg};
  fs::path dir = prepare_output(cfg);
  Weight w = build_weight(cfg);
  require(!cfg.tau_list.empty(), "thin-band task needs task.tau_list");
  ThinBandReport rep = thin_band(w, cfg.tau_list, harness_options(cfg));
  write_text_file(dir / "thin_band.json", thin_band_json(rep));
  dump_thin_band_csv(dir / "thin_band.csv", cfg.weight_name, rep);
  dump_curve_csv(dir / "zero_curve.csv", extract_zero_curve(w));
  manifest.artifacts = {"thin_band.json", "thin_band.csv", "zero_curve.csv"};
  manifest.emit(dir);
  std::cout << "thin-band: fitted exponent " << format_double(rep.fitted_exponent)
            << ", coefficient ratio " << format_double(rep.fitted_coeff_ratio)
            << "\n";
  return 0;
}

int run_large_tau(const RunConfig& cfg) {
  Manifest manifest{cfg};
  fs::path dir = prepare_output(cfg);
  Weight w = build_weight(cfg);
  LargeTauReport rep = large_tau_check(w, cfg.tau, cfg.h_list,
                                       harness_options(cfg));
  write_text_file(dir / "large_tau.json", large_tau_json(rep));
  manifest.artifacts = {"large_tau.json"};
  manifest.emit(dir);
  for (size_t i = 0; i < rep.h_list.size(); ++i)
    std::cout << "large-tau: h " << format_double(rep.h_list[i]) << ", N "
              << rep.counts[i] << "\n";
  if (!rep.all_one) {
    std::cerr << "large-tau check failed: expected exactly one singular value "
                 "below the threshold at every h\n";
    return 2;
  }
  return 0;
}

int run_decay(const RunConfig& cfg) {
  Manifest manifest{cfg};
  fs::path dir = prepare_output(cfg);
  Weight w = build_weight(cfg);
  DecayReport rep = decay_experiment(w, cfg.tau, cfg.h_list, cfg.radius,
                                     harness_options(cfg));
  write_text_file(dir / "decay.json", decay_json(rep));
  dump_decay_csv(dir / "decay.csv", cfg.weight_name, rep);
  manifest.artifacts = {"decay.json", "decay.csv"};
  manifest.emit(dir);
  std::cout << "decay: slope " << format_double(rep.slope) << " per 1/h\n";
  return 0;
}

int run_oracle_compare(const RunConfig& cfg) {
  Manifest manifest{cfg};
  fs::path dir = prepare_output(cfg);
  Weight w = build_weight(cfg);
  OracleCompareReport rep = compare_with_oracle(w, cfg.tau, cfg.h_list,
                                                cfg.lowest,
                                                harness_options(cfg));
  write_text_file(dir / "oracle_compare.json", oracle_compare_json(rep));
  manifest.artifacts = {"oracle_compare.json"};
  manifest.emit(dir);
  for (size_t i = 0; i < rep.h_list.size(); ++i)
    std::cout << "oracle-compare: h " << format_double(rep.h_list[i])
              << ", N_2d " << rep.counts_2d[i] << ", N_oracle "
              << rep.counts_oracle[i] << ", max rel diff "
              << format_double(rep.max_rel_diff_low[i]) << "\n";
  if (!rep.counts_match) {
    std::cerr << "oracle-compare failed: 2-D and oracle counts disagree\n";
    return 2;
  }
  return 0;
}

int run_validate(const RunConfig& cfg) {
  ValidationReport rep = validate_config(cfg);
  for (const std::string& d : rep.diagnostics)
    std::cout << "diagnostic: " << d << "\n";
  std::cout << rep.plan << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dbarlab: singular-value counts for the weighted semiclassical "
               "dbar operator on the torus.\n"
               "Precision guard: spectrum tasks refuse tau/h > 25; dense SVD "
               "thresholds below ~1e-11 are unreliable in double precision."};
  app.require_subcommand(1);

  struct Sub {
    Task task;
    int (*fn)(const RunConfig&);
    const char* help;
  };
  const std::vector<Sub> subs = {
      {Task::obstacle, run_obstacle, "Solve the double obstacle problem"},
      {Task::contacts, run_contacts, "Extract contact sets and structure"},
      {Task::spectrum, run_spectrum, "Dense singular values at one h"},
      {Task::weyl, run_weyl_task, "Weyl count check over an h list"},
      {Task::thin_band, run_thin_band, "Small-tau volume-deficit asymptotics"},
      {Task::large_tau, run_large_tau,
       "Check N = 1 for tau above the oscillation"},
      {Task::decay, run_decay, "Singular-state localization experiment"},
      {Task::oracle_compare, run_oracle_compare,
       "2-D spectrum vs separation-of-variables oracle"},
      {Task::validate, run_validate, "Dry-run config diagnostics"},
  };

  std::vector<CommonArgs> args(subs.size());
  std::vector<CLI::App*> cmds;
  for (size_t i = 0; i < subs.size(); ++i) {
    CLI::App* cmd = app.add_subcommand(to_string(subs[i].task), subs[i].help);
    add_common(cmd, args[i]);
    cmds.push_back(cmd);
  }

  CLI11_PARSE(app, argc, argv);

  for (size_t i = 0; i < subs.size(); ++i) {
    if (!cmds[i]->parsed()) continue;
    try {
      RunConfig cfg = resolve(subs[i].task, args[i]);
      return subs[i].fn(cfg);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 1;
}
