#include "gradsense/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gradsense/diagnostics.hpp"
#include "gradsense/expmv.hpp"

namespace gradsense::protocols {

using hilbert::Axis;
using hilbert::CompositeState;
using hilbert::OperatorMatrix;

double default_final_time(const models::ProbeParams& p) {
  if (!(p.gamma > 0.0)) throw DomainError("adiabatic protocol needs gamma > 0");
  const auto modes = models::collective_transform(p);
  const double j = std::abs(modes.j_coupling);
  double t = 8.0 / p.gamma;
  if (j > 0.0 && p.omega0 > 0.01 * j) t = std::max(t, std::log(p.omega0 / (0.01 * j)) / p.gamma);
  return t;
}

std::string configuration_key(const std::vector<bool>& spin_down) {
  std::string key;
  for (bool d : spin_down) key.push_back(d ? 'd' : 'u');
  return key;
}

OperatorMatrix configuration_projector(const hilbert::BasisDescriptor& basis, const std::vector<bool>& spin_down) {
  if (static_cast<int>(spin_down.size()) != basis.num_spins()) {
    throw std::invalid_argument("configuration_projector: one entry per spin required");
  }
  OperatorMatrix proj = OperatorMatrix::identity(basis);
  for (int j = 0; j < basis.num_spins(); ++j) {
    const double s = spin_down[static_cast<std::size_t>(j)] ? -0.5 : 0.5;
    proj = proj * (0.5 * OperatorMatrix::identity(basis) + s * hilbert::pauli_op(basis, j, Axis::z));
  }
  return proj;
}

namespace {

CompositeState initial_state(const hilbert::BasisDescriptor& basis) {
  std::vector<hilbert::Vector> spins(static_cast<std::size_t>(basis.num_spins()), hilbert::spin_states::minus());
  std::vector<hilbert::Vector> modes;
  for (int d : basis.fock_dims()) {
    hilbert::Vector v = hilbert::Vector::Zero(d);
    v(0) = 1.0;
    modes.push_back(v);
  }
  return CompositeState::product(basis, spins, modes);
}

void check_regime(const models::ProbeParams& p) {
  const auto modes = models::collective_transform(p);
  double g = 0.0;
  for (double x : p.g) g = std::max(g, std::abs(x));
  const double scale = std::max(modes.omega_c(), g);
  if (p.omega0 < 10.0 * scale) {
    std::ostringstream os;
    os << "Omega(0) = " << p.omega0 << " krad/s is not much larger than max(omega_c, g) = " << scale
       << "; the initial state is not the instantaneous ground state";
    diagnostics::warn(os.str());
  }
}

}  // namespace

AdiabaticResult adiabatic_protocol_run(const models::ProbeParams& p, const Perturbation& perturbation,
                                       const AdiabaticOptions& options) {
  p.validate();
  check_regime(p);
  const auto basis = p.basis();
  TimeDependentHamiltonian h = models::rabi_lattice_hamiltonian(p);
  if (const auto* f = std::get_if<models::ForceField>(&perturbation)) {
    h.add_static(models::build_force_term(p, *f));
  } else {
    h.add_static(models::build_magnetic_term(std::get<models::MagneticField>(perturbation), basis));
  }

  dynamics::PropagationConfig cfg;
  cfg.t_final = options.t_final > 0.0 ? options.t_final : default_final_time(p);
  if (cfg.t_final * p.gamma < 5.0) diagnostics::warn("t_final shorter than 5/gamma: the sweep is not complete");
  cfg.tolerance = options.tolerance;
  cfg.record_points = options.record_points;
  cfg.method = options.method;
  cfg.truncation_threshold = options.truncation_threshold;
  for (int j = 0; j < p.num_ions; ++j) {
    cfg.observables.push_back({"sz" + std::to_string(j + 1), hilbert::pauli_op(basis, j, Axis::z)});
  }
  for (const auto& o : options.extra_observables) cfg.observables.push_back(o);

  AdiabaticResult out;
  out.t_final = cfg.t_final;
  out.trajectory = dynamics::propagate(h, initial_state(basis), cfg);
  const auto last = static_cast<Eigen::Index>(out.trajectory.times.size() - 1);
  for (int j = 0; j < p.num_ions; ++j) {
    const double sz = out.trajectory.values(last, j);
    out.sigma_z.push_back(sz);
    out.p_up.push_back(0.5 * (1.0 + sz));
  }
  const int n = p.num_ions;
  for (int s = 0; s < (1 << n); ++s) {
    std::vector<bool> down(static_cast<std::size_t>(n));
    bool buf[8];
    for (int j = 0; j < n; ++j) {
      down[static_cast<std::size_t>(j)] = ((s >> (n - 1 - j)) & 1) != 0;
      buf[j] = down[static_cast<std::size_t>(j)];
    }
    out.configuration[configuration_key(down)] =
        hilbert::spin_configuration_probability(out.trajectory.final_state, std::span<const bool>(buf, n));
  }
  return out;
}

ConvergenceCheck adiabatic_truncation_check(const models::ProbeParams& p, const Perturbation& perturbation,
                                            const AdiabaticOptions& options, int extra) {
  ConvergenceCheck c;
  AdiabaticOptions opt = options;
  if (opt.t_final <= 0.0) opt.t_final = default_final_time(p);
  c.base = adiabatic_protocol_run(p, perturbation, opt);
  models::ProbeParams q = p;
  q.n_max += extra;
  c.raised = adiabatic_protocol_run(q, perturbation, opt);
  for (std::size_t j = 0; j < c.base.sigma_z.size(); ++j) {
    c.max_delta = std::max(c.max_delta, std::abs(c.base.sigma_z[j] - c.raised.sigma_z[j]));
  }
  for (const auto& [k, v] : c.base.configuration) {
    c.max_delta = std::max(c.max_delta, std::abs(v - c.raised.configuration.at(k)));
  }
  return c;
}

OscillatorRun oscillator_run(const models::ProbeParams& p, const models::ForceField& f, OscillatorModel model,
                             const std::vector<double>& times) {
  p.validate();
  if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0)) {
    throw std::invalid_argument("oscillator_run: times must be ascending and nonnegative");
  }
  OperatorMatrix h;
  if (model == OscillatorModel::effective_bosonic) {
    h = models::build_effective_bosonic(p, f);
  } else {
    models::ProbeParams q = p;
    q.gamma = 0.0;
    h = models::build_rabi_lattice(q, 0.0) + models::build_force_term(q, f);
  }
  const auto& basis = h.basis();
  const auto modes = models::collective_transform(p);
  std::vector<OperatorMatrix> n_ops;
  std::vector<OperatorMatrix> n2_ops;
  for (int q = 0; q < p.num_ions; ++q) {
    const OperatorMatrix a = models::collective_annihilation(basis, modes, q);
    const OperatorMatrix n = a.adjoint() * a;
    n_ops.push_back(n);
    n2_ops.push_back(n * n);
  }

  OscillatorRun out;
  out.times = times;
  out.mode_labels = modes.labels;
  out.mean_phonons.resize(static_cast<Eigen::Index>(times.size()), p.num_ions);
  out.phonon_variance.resize(static_cast<Eigen::Index>(times.size()), p.num_ions);

  CompositeState psi = initial_state(basis);
  dynamics::HermitianGenerator gen(h.matrix());
  double t = 0.0;
  for (std::size_t r = 0; r < times.size(); ++r) {
    psi = CompositeState(basis, gen.evolve(psi.amplitudes(), times[r] - t));
    t = times[r];
    out.norm_drift = std::max(out.norm_drift, std::abs(psi.norm() - 1.0));
    for (int q = 0; q < p.num_ions; ++q) {
      const double n = hilbert::expectation(psi, n_ops[static_cast<std::size_t>(q)]).real();
      const double n2 = hilbert::expectation(psi, n2_ops[static_cast<std::size_t>(q)]).real();
      out.mean_phonons(static_cast<Eigen::Index>(r), q) = n;
      out.phonon_variance(static_cast<Eigen::Index>(r), q) = n2 - n * n;
    }
    for (int m = 0; m < basis.num_modes(); ++m) {
      const double top = hilbert::top_level_population(psi, m, 2);
      if (top > 1e-4) {
        std::ostringstream os;
        os << "truncation overflow in mode " << basis.mode_labels()[m] << " at t = " << t << " (population " << top
           << ")";
        throw NumericalError(os.str());
      }
    }
  }
  out.final_state = psi;
  return out;
}

}  // namespace gradsense::protocols
