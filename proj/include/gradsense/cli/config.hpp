#pragma once

// INI-style scenario files. Every dimensional value carries a unit suffix;
// values are converted to internal units (krad/s, ms, SI for forces/lengths/fields)
// on load.
//
//   scenario = fig1
//   [probe]
//   omega0 = 825 kHz_paper
//   phi = 0.5 pi
//   [force]
//   F1 = 3.78 yN
//   [sweep]
//   parameter = phi
//   from = 0 pi
//   to = 2 pi
//   points = 16

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gradsense/models.hpp"
#include "gradsense/protocols.hpp"

namespace gradsense::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line = 0, int column = 0);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

enum class Dimension { none, integer, text, frequency, time, force, length, field, gradient, angle, mass, charge };

/// "3.78 yN" -> 3.78e-24 for Dimension::force. Throws ConfigError (column
/// relative to `text`) for a missing or mismatched unit.
double parse_quantity(const std::string& text, Dimension dim);

/// Comma-separated list of quantities.
std::vector<double> parse_quantity_list(const std::string& text, Dimension dim);

/// Dimension of `section.key`; throws ConfigError for unknown keys.
Dimension key_dimension(const std::string& section, const std::string& key);

struct SweepAxis {
  std::string parameter;
  std::vector<double> values;  ///< internal units
};

enum class Protocol { adiabatic, oscillator };
enum class Method { analytic, numeric };

struct ScenarioSpec {
  std::string name = "custom";  ///< fig1 ... fig5 or custom
  models::ProbeParams probe;
  std::optional<models::ForceField> force;
  std::optional<models::MagneticField> magnetic;
  std::optional<models::TrapGeometry> trap;
  Protocol protocol = Protocol::adiabatic;
  Method method = Method::analytic;
  std::string estimand = "force";  ///< force, phase (force fields) or gradient
  std::string mode = "rock";       ///< oscillator readout mode
  std::optional<SweepAxis> sweep;
  std::optional<SweepAxis> series;
  double t_final = 0.0;     ///< [ms], 0 = automatic
  double tolerance = 1e-4;
  int record_points = 400;
  int k_c = 3;
  int k_r = 1;
  long n_experiments = 1;
  /// "section.key = raw -> interpreted" lines in file order.
  std::vector<std::string> audit;

  protocols::Perturbation perturbation() const;
  /// Throws ConfigError when the spec is inconsistent.
  void validate() const;
};

/// Parse a config document. `source` names the origin in messages.
ScenarioSpec parse_config(const std::string& text, const std::string& source = "<config>");
ScenarioSpec load_config(const std::string& path);

/// Apply "section.key=value" (or "key=value" for unambiguous keys).
void apply_override(ScenarioSpec& spec, const std::string& assignment);

/// Set a sweepable parameter (probe/force/magnetic key or zeta_sq) in internal units.
void set_parameter(ScenarioSpec& spec, const std::string& name, double value);
bool is_sweepable(const std::string& name);

/// Human-readable echo of the interpreted spec, including derived drive rates.
std::string echo(const ScenarioSpec& spec);

}  // namespace gradsense::cli
