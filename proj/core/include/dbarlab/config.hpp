#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dbarlab/harness.hpp"

namespace dbarlab {

enum class Task {
  obstacle,
  contacts,
  spectrum,
  weyl,
  thin_band,
  large_tau,
  decay,
  oracle_compare,
  validate,
};

const char* to_string(Task t);
Task task_from_string(const std::string& name);

/// Flat dotted-key configuration. Defaults <- config file <- --set overrides,
/// later wins. Unknown keys are rejected with the key name.
struct RunConfig {
  Task task = Task::validate;

  std::string weight_name = "siny";
  std::map<std::string, double> weight_params;  // sigma, amplitude, center_*
  std::string weight_source_csv;                // custom-poisson source

  int nx = 64;
  int ny = 64;

  std::string method = "psor";  // obstacle.method
  PsorOptions psor;
  PenaltyParams penalty;

  double tau = 0.5;
  std::vector<double> h_list{0.2, 0.125, 0.08};
  std::vector<double> tau_list;
  double delta = 0.0;   // contact margin; 0 = derived default
  double radius = 0.5;  // decay neighborhood
  int k_max = 0;        // oracle modes; 0 = automatic bound
  int lowest = 50;      // oracle-compare depth
  int dense_cap = kDenseCapDefault;
  bool dump_spectrum_csv = false;

  std::filesystem::path output_dir;
  int workers = 1;

  /// Raw resolved key/value view for the manifest echo.
  std::map<std::string, std::string> echo;
};

/// Parses "key = value" lines; '#' starts a comment. Errors carry the line
/// number.
std::map<std::string, std::string> parse_config_file(
    const std::filesystem::path& path);

/// Applies "key=value" strings (CLI --set overrides) on top.
void apply_overrides(std::map<std::string, std::string>& kv,
                     const std::vector<std::string>& overrides);

RunConfig make_run_config(Task task,
                          const std::map<std::string, std::string>& kv);

/// Dry-run diagnostics: grid caps, precision guard, tau-vs-oscillation
/// routing, sizing. Report-only.
struct ValidationReport {
  std::vector<std::string> diagnostics;
  std::string plan;
  bool clean() const { return diagnostics.empty(); }
};

ValidationReport validate_config(const RunConfig& cfg);

/// Builds the configured weight (loads the source CSV for custom-poisson).
Weight build_weight(const RunConfig& cfg);

}  // namespace dbarlab
