#pragma once

// Time-dependent Schroedinger propagation, the two-state exponential-coupling
// (Demkov) problem and trajectory export.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "gradsense/hamiltonian.hpp"
#include "gradsense/hilbert.hpp"

namespace gradsense::dynamics {

enum class Method {
  /// Adaptive Dormand-Prince 5(4) on i d psi/dt = H(t) psi.
  dormand_prince,
  /// Fourth-order commutator-free Magnus integrator with Krylov exponentials
  /// and step-doubling error control.
  magnus4,
};

struct NamedObservable {
  std::string name;
  hilbert::OperatorMatrix op;
};

struct PropagationConfig {
  double t_start = 0.0;
  double t_final = 1.0;
  /// Local error per unit time (2-norm of the state).
  double tolerance = 1e-10;
  double max_step = 0.0;  ///< 0 means unbounded (apart from record spacing)
  double min_step = 1e-12;
  std::vector<NamedObservable> observables;
  /// Number of recorded intervals; records are taken at t_start + k (t_final - t_start) / record_points.
  int record_points = 500;
  Method method = Method::magnus4;
  double norm_tolerance = 1e-9;
  /// Abort when the top two Fock levels of any mode hold more than this.
  double truncation_threshold = 1e-4;

  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::string> names;
  /// Rows: recorded times; columns: observables (real part).
  Eigen::MatrixXd values;
  /// Imaginary parts of the same expectation values.
  Eigen::MatrixXd imag_residuals;
  std::vector<double> norm_drift_series;
  hilbert::CompositeState final_state;
  double norm_drift = 0.0;
  long steps_accepted = 0;
  long steps_rejected = 0;

  /// Column of observable `name`; throws when absent.
  Eigen::VectorXd column(const std::string& name) const;
};

using StateObserver = std::function<void(double t, const hilbert::CompositeState& psi)>;

/// Integrate i d psi/dt = H(t) psi from cfg.t_start to cfg.t_final.
/// Throws NumericalError on step underflow, norm drift above
/// cfg.norm_tolerance or truncation overflow.
Trajectory propagate(const TimeDependentHamiltonian& h, const hilbert::CompositeState& psi0,
                     const PropagationConfig& cfg, const StateObserver& observer = {});

struct TwoStateAmplitudes {
  std::vector<double> times;
  std::vector<hilbert::cplx> c_plus;
  std::vector<hilbert::cplx> c_minus;
  double alpha = 0.0;
  double delta_c0 = 0.0;
  double gamma = 0.0;
};

/// i dc+/dt = -alpha c+ - Dc e^{-2 gamma t} c-,  i dc-/dt = alpha c- - Dc e^{-2 gamma t} c+.
TwoStateAmplitudes demkov_integrate(double alpha, double delta_c0, double gamma, double t_final,
                                    std::pair<hilbert::cplx, hilbert::cplx> c0 = {M_SQRT1_2, M_SQRT1_2},
                                    int record_points = 200, double tolerance = 1e-12,
                                    Method method = Method::magnus4);

/// CSV with header t,<obs...>,norm_drift.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

/// Binary checkpoint: magic "GSCK", u32 version, u32 num_spins, u32 num_modes,
/// u32 fock_dims[num_modes], per-mode label (u32 length + UTF-8 bytes),
/// u64 amplitude count, then (f64 re, f64 im) pairs; all little-endian.
void write_checkpoint(std::ostream& os, const hilbert::CompositeState& state);
hilbert::CompositeState read_checkpoint(std::istream& is);

}  // namespace gradsense::dynamics
