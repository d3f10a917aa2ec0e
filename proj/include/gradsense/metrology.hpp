#pragma once

// Fisher information, signal-to-noise and Cramer-Rao bookkeeping.

#include <functional>
#include <string>

#include "gradsense/analytic.hpp"
#include "gradsense/hilbert.hpp"

namespace gradsense::metrology {

/// Normalized state as a function of the estimated parameter.
using StateProvider = std::function<hilbert::Vector(double)>;

struct QfiEstimate {
  double value = 0.0;       ///< Richardson-extrapolated QFI
  double step_h = 0.0;      ///< QFI with step h
  double step_half = 0.0;   ///< QFI with step h/2
  double relative_change = 0.0;  ///< |I(h) - I(h/2)| / max(I, floor)
};

/// Pure-state QFI 4 [<d psi|d psi> - |<psi|d psi>|^2] with central
/// differences at h and h/2 combined by Richardson extrapolation. Throws
/// std::invalid_argument for non-normalized provider output and
/// NumericalError when I(h) and I(h/2) differ by more than `max_change`
/// (relative) -- the derivative has not converged.
QfiEstimate qfi_numeric(const StateProvider& provider, double theta0, double h, double max_change = 4e-3);

enum class Parameter { force_difference, force_sum, force_phase, magnetic_gradient };

std::string parameter_name(Parameter p);
/// SI unit of the parameter: N, rad, T/m.
std::string parameter_unit(Parameter p);

struct EstimationReport {
  Parameter parameter = Parameter::force_difference;
  std::string readout;  ///< "spin" or "phonon:<mode>"
  double signal = 0.0;
  double variance = 0.0;
  double snr = 0.0;
  double fisher_classical = 0.0;
  analytic::TaggedValue fisher_quantum;
  double cramer_rao_bound = 0.0;          ///< 1 / (n I_cl)
  double quantum_cramer_rao_bound = 0.0;  ///< 1 / (n I_Q); 0 when I_Q diverges
  double min_detectable = 0.0;            ///< parameter value with SNR = 1
  long n_experiments = 1;
  std::string caveat;
};

/// Variance 1 - <s>^2 of a two-outcome spin observable.
double spin_variance(double sigma_z);

/// signal / sqrt(variance); 0 for a zero signal. Throws DomainError for a
/// zero variance with nonzero signal.
double snr(double signal, double variance);

/// Report for a spin readout with <s1z> = sigma_z.
EstimationReport spin_report(Parameter parameter, double sigma_z, double fisher_classical,
                             const analytic::TaggedValue& fisher_quantum, double min_detectable,
                             long n_experiments = 1);

/// Report for phonon-number readout of `mode` in `state`; mean and variance
/// are taken from the state itself.
EstimationReport phonon_report(Parameter parameter, const hilbert::CompositeState& state,
                               const hilbert::OperatorMatrix& number_op, const std::string& mode,
                               const analytic::TaggedValue& fisher_quantum, double min_detectable,
                               long n_experiments = 1);

/// JSON object with {"value": ..., "unit": ...} per field.
std::string to_json(const EstimationReport& r, int indent = 2);

struct SldEigen {
  hilbert::Vector plus;
  hilbert::Vector minus;
  double l_plus = 0.0;
  double l_minus = 0.0;
  double qfi = 0.0;  ///< 4 <d psi|d psi>
};

/// Eigenpairs of L = 2(|psi><d psi| + |d psi><psi|) in the span of psi and
/// d psi. Requires |<psi|d psi>| <= tol (throws DomainError otherwise).
SldEigen sld_pure(const hilbert::Vector& psi, const hilbert::Vector& dpsi, double tol = 1e-6);

}  // namespace gradsense::metrology
