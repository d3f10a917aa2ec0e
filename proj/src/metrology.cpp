#include "gradsense/metrology.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "gradsense/diagnostics.hpp"

namespace gradsense::metrology {

using hilbert::cplx;
using hilbert::Vector;

namespace {

double pure_qfi(const Vector& psi, const Vector& dpsi) {
  const cplx overlap = psi.dot(dpsi);
  return 4.0 * (dpsi.squaredNorm() - std::norm(overlap));
}

Vector checked(const StateProvider& provider, double theta) {
  Vector v = provider(theta);
  if (std::abs(v.norm() - 1.0) > 1e-8) {
    std::ostringstream os;
    os << "state provider returned a state with norm " << v.norm() << " at parameter " << theta;
    throw std::invalid_argument(os.str());
  }
  return v;
}

}  // namespace

QfiEstimate qfi_numeric(const StateProvider& provider, double theta0, double h, double max_change) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  const Vector psi = checked(provider, theta0);
  const Vector d1 = (checked(provider, theta0 + h) - checked(provider, theta0 - h)) / (2.0 * h);
  const Vector d2 = (checked(provider, theta0 + 0.5 * h) - checked(provider, theta0 - 0.5 * h)) / h;
  const Vector dr = (4.0 * d2 - d1) / 3.0;

  QfiEstimate q;
  q.step_h = pure_qfi(psi, d1);
  q.step_half = pure_qfi(psi, d2);
  q.value = pure_qfi(psi, dr);
  // absolute floor: a parameter-independent state gives zero at every h
  const double floor = 1e-12 / (h * h);
  q.relative_change = std::abs(q.step_h - q.step_half) / std::max(std::abs(q.value), floor);
  if (q.relative_change > max_change) {
    std::ostringstream os;
    os << "QFI finite difference not converged: I(h) = " << q.step_h << ", I(h/2) = " << q.step_half
       << " (h = " << h << ")";
    throw NumericalError(os.str());
  }
  return q;
}

std::string parameter_name(Parameter p) {
  switch (p) {
    case Parameter::force_difference: return "force_difference";
    case Parameter::force_sum: return "force_sum";
    case Parameter::force_phase: return "force_phase";
    case Parameter::magnetic_gradient: return "magnetic_gradient";
  }
  return "unknown";
}

std::string parameter_unit(Parameter p) {
  switch (p) {
    case Parameter::force_difference:
    case Parameter::force_sum: return "N";
    case Parameter::force_phase: return "rad";
    case Parameter::magnetic_gradient: return "T/m";
  }
  return "";
}

double spin_variance(double sigma_z) { return std::max(0.0, 1.0 - sigma_z * sigma_z); }

double snr(double signal, double variance) {
  if (signal == 0.0) return 0.0;
  if (!(variance > 0.0)) throw DomainError("zero variance with nonzero signal: SNR undefined");
  return signal / std::sqrt(variance);
}

namespace {

void fill_bounds(EstimationReport& r) {
  if (r.n_experiments < 1) throw std::invalid_argument("n_experiments must be >= 1");
  const auto n = static_cast<double>(r.n_experiments);
  r.cramer_rao_bound = r.fisher_classical > 0.0 ? 1.0 / (n * r.fisher_classical)
                                                : std::numeric_limits<double>::infinity();
  if (r.fisher_quantum.diverges) {
    r.quantum_cramer_rao_bound = 0.0;
  } else {
    r.quantum_cramer_rao_bound = r.fisher_quantum.value > 0.0 ? 1.0 / (n * r.fisher_quantum.value)
                                                              : std::numeric_limits<double>::infinity();
  }
}

}  // namespace

EstimationReport spin_report(Parameter parameter, double sigma_z, double fisher_classical,
                             const analytic::TaggedValue& fisher_quantum, double min_detectable, long n_experiments) {
  EstimationReport r;
  r.parameter = parameter;
  r.readout = "spin";
  r.signal = sigma_z;
  r.variance = spin_variance(sigma_z);
  r.snr = snr(sigma_z, r.variance);
  r.fisher_classical = fisher_classical;
  r.fisher_quantum = fisher_quantum;
  r.min_detectable = min_detectable;
  r.n_experiments = n_experiments;
  if (parameter == Parameter::force_difference || parameter == Parameter::force_phase) {
    r.caveat = "F_- and xi are not estimated jointly: a two-outcome spin measurement bounds one parameter at a time";
  }
  fill_bounds(r);
  return r;
}

EstimationReport phonon_report(Parameter parameter, const hilbert::CompositeState& state,
                               const hilbert::OperatorMatrix& number_op, const std::string& mode,
                               const analytic::TaggedValue& fisher_quantum, double min_detectable,
                               long n_experiments) {
  EstimationReport r;
  r.parameter = parameter;
  r.readout = "phonon:" + mode;
  const Vector n_psi = number_op.apply(state.amplitudes());
  r.signal = state.amplitudes().dot(n_psi).real();
  r.variance = std::max(0.0, n_psi.squaredNorm() - r.signal * r.signal);
  r.snr = snr(r.signal, r.variance);
  r.fisher_classical = 0.0;
  r.fisher_quantum = fisher_quantum;
  r.min_detectable = min_detectable;
  r.n_experiments = n_experiments;
  fill_bounds(r);
  return r;
}

std::string to_json(const EstimationReport& r, int indent) {
  using nlohmann::ordered_json;
  const std::string u = parameter_unit(r.parameter);
  auto field = [](double v, const std::string& unit) {
    ordered_json j;
    if (std::isfinite(v)) j["value"] = v;
    else j["value"] = v > 0 ? "inf" : "-inf";
    j["unit"] = unit;
    return j;
  };
  ordered_json j;
  j["parameter"] = parameter_name(r.parameter);
  j["readout"] = r.readout;
  const std::string signal_unit = r.readout == "spin" ? "1" : "phonons";
  j["signal"] = field(r.signal, signal_unit);
  j["variance"] = field(r.variance, r.readout == "spin" ? "1" : "phonons^2");
  j["snr"] = field(r.snr, "1");
  j["fisher_classical"] = field(r.fisher_classical, "1/" + u + "^2");
  ordered_json fq = field(r.fisher_quantum.value, "1/" + u + "^2");
  fq["diverges"] = r.fisher_quantum.diverges;
  if (!r.fisher_quantum.note.empty()) fq["note"] = r.fisher_quantum.note;
  j["fisher_quantum"] = fq;
  j["cramer_rao_bound"] = field(r.cramer_rao_bound, u + "^2");
  j["quantum_cramer_rao_bound"] = field(r.quantum_cramer_rao_bound, u + "^2");
  j["min_detectable"] = field(r.min_detectable, u);
  j["n_experiments"] = r.n_experiments;
  if (!r.caveat.empty()) j["caveat"] = r.caveat;
  return j.dump(indent);
}

SldEigen sld_pure(const Vector& psi, const Vector& dpsi, double tol) {
  if (psi.size() != dpsi.size()) throw std::invalid_argument("state and derivative differ in length");
  if (std::abs(psi.norm() - 1.0) > 1e-8) throw std::invalid_argument("state is not normalized");
  const cplx overlap = psi.dot(dpsi);
  if (std::abs(overlap) > tol) {
    std::ostringstream os;
    os << "<psi|d psi> = " << std::abs(overlap) << " exceeds " << tol << "; not at the readout time";
    throw DomainError(os.str());
  }
  SldEigen out;
  const double n = dpsi.norm();
  out.qfi = 4.0 * n * n;
  if (n == 0.0) {
    // L = 0: every vector is an eigenvector
    out.plus = psi;
    out.minus = psi;
    return out;
  }
  const Vector u = dpsi / n;
  out.plus = (psi + u) / std::sqrt(2.0);
  out.minus = (psi - u) / std::sqrt(2.0);
  out.l_plus = 2.0 * n;
  out.l_minus = -2.0 * n;
  return out;
}

}  // namespace gradsense::metrology
