#pragma once

// Full-model runs of the two sensing protocols.

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "gradsense/dynamics.hpp"
#include "gradsense/models.hpp"

namespace gradsense::protocols {

using Perturbation = std::variant<models::ForceField, models::MagneticField>;

struct AdiabaticOptions {
  /// 0 selects the automatic final time (see default_final_time).
  double t_final = 0.0;
  double tolerance = 1e-4;
  int record_points = 500;
  dynamics::Method method = dynamics::Method::magnus4;
  double truncation_threshold = 1e-4;
  /// Recorded alongside sz1, sz2, ...
  std::vector<dynamics::NamedObservable> extra_observables;
};

struct AdiabaticResult {
  double t_final = 0.0;
  std::vector<double> sigma_z;  ///< <sigma_j^z(t_f)>
  std::vector<double> p_up;     ///< (1 + <sigma_j^z>) / 2
  /// Spin configuration probabilities keyed by strings such as "ud" (ion 1 up, ion 2 down).
  std::map<std::string, double> configuration;
  dynamics::Trajectory trajectory;  ///< observables sz1, sz2(, sz3)
};

/// max(8/gamma, ln(Omega0 / (0.01 |J|)) / gamma): the drive has dropped two
/// decades below the spin-spin coupling, so the effective two-state coupling
/// is negligible next to the signal asymmetry.
double default_final_time(const models::ProbeParams& p);

/// Propagate H_RL(t) + perturbation from |- - ...>|0 ...>.
AdiabaticResult adiabatic_protocol_run(const models::ProbeParams& p, const Perturbation& perturbation,
                                       const AdiabaticOptions& options = {});

/// Configuration key: 'u' for up, 'd' for down, ion 1 first.
/// Projector onto a spin configuration (spin_down[j] selects |down> on ion j), identity on the modes.
hilbert::OperatorMatrix configuration_projector(const hilbert::BasisDescriptor& basis, const std::vector<bool>& spin_down);

std::string configuration_key(const std::vector<bool>& spin_down);

struct ConvergenceCheck {
  AdiabaticResult base;
  AdiabaticResult raised;
  /// Largest change of any sigma_z or configuration probability.
  double max_delta = 0.0;
};

/// Run twice, with n_max and n_max + extra.
ConvergenceCheck adiabatic_truncation_check(const models::ProbeParams& p, const Perturbation& perturbation,
                                            const AdiabaticOptions& options = {}, int extra = 4);

enum class OscillatorModel {
  effective_bosonic,  ///< spins eliminated to order g^2/Omega
  full,               ///< H_RL + H_F with spins in |- - ...> initially
};

struct OscillatorRun {
  std::vector<double> times;
  std::vector<std::string> mode_labels;   ///< com, rock(, egypt)
  Eigen::MatrixXd mean_phonons;           ///< rows: times; columns: collective modes
  Eigen::MatrixXd phonon_variance;        ///< <n_q^2> - <n_q>^2
  hilbert::CompositeState final_state;
  double norm_drift = 0.0;
};

/// Constant-drive (gamma ignored) propagation from the phonon vacuum; records
/// collective <n_q> and its variance at the given times (ascending, >= 0).
OscillatorRun oscillator_run(const models::ProbeParams& p, const models::ForceField& f, OscillatorModel model,
                             const std::vector<double>& times);

}  // namespace gradsense::protocols
