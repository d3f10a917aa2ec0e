#pragma once

// Figure reproduction: canned configs under configs/paper/, closed form and
// simulation side by side, plus a JSON report with their deviation.

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "gradsense/cli/config.hpp"

namespace gradsense::cli {

struct FigureOptions {
  std::string out_dir = ".";
  int n_max = 0;  ///< 0: GRADSENSE_NMAX, else the config value
  int jobs = 1;
  std::vector<std::string> overrides;
  bool plot = true;
  /// Extra Fock levels for the convergence check; -1 picks the figure default, 0 skips it.
  int truncation_extra = -1;
  std::string config_dir;  ///< empty: GRADSENSE_CONFIG_DIR or the source tree
};

struct FigureReport {
  std::string name;
  std::vector<std::string> files;
  double max_deviation = 0.0;
  double threshold = 0.0;
  double truncation_delta = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::string> notes;
  double runtime_s = 0.0;

  bool within_threshold() const { return max_deviation <= threshold; }
  double metric(const std::string& key) const;
};

std::vector<std::string> figure_names();
std::string canned_config_path(const std::string& name, const std::string& config_dir = "");

/// Canned spec with n_max and overrides applied.
ScenarioSpec figure_spec(const std::string& name, const FigureOptions& options);

/// Writes <name>_analytic.csv, <name>_numeric.csv, <name>_report.json and,
/// with options.plot, <name>.svg into options.out_dir.
FigureReport run_figure(const std::string& name, const FigureOptions& options);

/// n_max from GRADSENSE_NMAX, or 0 when unset. Throws ConfigError when malformed.
int nmax_from_environment();

}  // namespace gradsense::cli
