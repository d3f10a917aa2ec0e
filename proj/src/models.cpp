#include "gradsense/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gradsense/diagnostics.hpp"
#include "gradsense/units.hpp"

namespace gradsense {

TimeDependentHamiltonian::TimeDependentHamiltonian(hilbert::OperatorMatrix static_part)
    : static_part_(std::move(static_part)) {}

TimeDependentHamiltonian& TimeDependentHamiltonian::add_static(const hilbert::OperatorMatrix& term) {
  static_part_ += term;
  return *this;
}

TimeDependentHamiltonian& TimeDependentHamiltonian::add_modulated(const hilbert::OperatorMatrix& term,
                                                                  Envelope envelope) {
  hilbert::require_same_basis(static_part_.basis(), term.basis());
  modulated_.emplace_back(term, std::move(envelope));
  return *this;
}

hilbert::SparseMatrix TimeDependentHamiltonian::at(double t) const {
  hilbert::SparseMatrix h = static_part_.matrix();
  for (const auto& [op, envelope] : modulated_) h += envelope(t) * op.matrix();
  return h;
}

hilbert::Vector TimeDependentHamiltonian::apply(double t, const hilbert::Vector& v) const {
  hilbert::Vector out = static_part_.matrix() * v;
  for (const auto& [op, envelope] : modulated_) out += envelope(t) * (op.matrix() * v);
  return out;
}

namespace models {

using hilbert::Axis;
using hilbert::BasisDescriptor;
using hilbert::cplx;
using hilbert::OperatorMatrix;

namespace {

const cplx I{0.0, 1.0};

std::vector<std::pair<int, int>> hopping_bonds(int num_ions) {
  std::vector<std::pair<int, int>> bonds;
  for (int j = 0; j + 1 < num_ions; ++j) bonds.emplace_back(j, j + 1);
  return bonds;
}

double max_abs_g(const ProbeParams& p) {
  double m = 0.0;
  for (double g : p.g) m = std::max(m, std::abs(g));
  return m;
}

}  // namespace

void ProbeParams::validate() const {
  if (num_ions != 2 && num_ions != 3) throw std::invalid_argument("num_ions must be 2 or 3");
  if (static_cast<int>(g.size()) != num_ions || static_cast<int>(phi.size()) != num_ions) {
    throw std::invalid_argument("g and phi must have one entry per ion");
  }
  if (!(delta > kappa) || kappa < 0.0) throw DomainError("need delta > kappa >= 0");
  if (omega0 < 0.0 || gamma < 0.0) throw DomainError("omega0 and gamma must be nonnegative");
  if (!(x0 > 0.0)) throw DomainError("x0 must be positive");
  if (n_max < 2) throw std::invalid_argument("n_max must be >= 2");
}

double ProbeParams::drive_at(double t) const { return omega0 * std::exp(-gamma * t); }

BasisDescriptor ProbeParams::basis() const {
  std::vector<std::string> labels;
  for (int j = 0; j < num_ions; ++j) labels.push_back("local-" + std::to_string(j + 1));
  return BasisDescriptor(num_ions, std::vector<int>(static_cast<std::size_t>(num_ions), n_max), labels);
}

ProbeParams ProbeParams::uniform(int num_ions, double omega0, double gamma, double delta, double kappa, double g,
                                 double phi, double x0, int n_max) {
  ProbeParams p;
  p.num_ions = num_ions;
  p.omega0 = omega0;
  p.gamma = gamma;
  p.delta = delta;
  p.kappa = kappa;
  p.g.assign(static_cast<std::size_t>(num_ions), g);
  p.phi.assign(static_cast<std::size_t>(num_ions), phi);
  p.x0 = x0;
  p.n_max = n_max;
  return p;
}

ForceField ForceField::from_drive_rates(const std::vector<double>& rates, double xi, double x0) {
  ForceField f;
  f.xi = xi;
  for (double r : rates) f.force.push_back(units::force_from_drive_rate(r, x0));
  return f;
}

std::vector<double> ForceField::drive_rates(double x0) const {
  std::vector<double> r;
  for (double F : force) r.push_back(units::force_drive_rate(F, x0));
  return r;
}

double MagneticField::lambda() const { return units::magnetic_coupling(lande_g); }

std::vector<double> MagneticField::detunings() const {
  std::vector<double> d;
  for (double z : z_positions) d.push_back(units::from_rad_per_s(lambda() * (b0 + b_prime * z)));
  return d;
}

double hopping_from_trap(const TrapGeometry& trap, CoulombConvention convention) {
  if (!(trap.mass > 0.0) || !(trap.charge > 0.0) || !(trap.omega_x > 0.0) || !(trap.dz > 0.0)) {
    throw DomainError("hopping_from_trap: mass, charge, omega_x and dz must be positive");
  }
  double kappa_rad_s = 0.0;
  if (convention == CoulombConvention::si) {
    const double coulomb = trap.charge * trap.charge / (4.0 * units::pi * units::vacuum_permittivity);
    kappa_rad_s = coulomb / (2.0 * trap.mass * trap.omega_x * std::pow(trap.dz, 3));
  } else {
    // statC per C is 10 c with c in m/s; grams and centimetres.
    constexpr double statcoulomb_per_coulomb = 2.99792458e9;
    const double e_cgs = trap.charge * statcoulomb_per_coulomb;
    const double m_g = trap.mass * 1e3;
    const double dz_cm = trap.dz * 1e2;
    kappa_rad_s = e_cgs * e_cgs / (2.0 * m_g * trap.omega_x * std::pow(dz_cm, 3));
  }
  return units::from_rad_per_s(kappa_rad_s);
}

CollectiveModeSpec collective_transform(const ProbeParams& p) {
  if (p.num_ions != 2 && p.num_ions != 3) throw std::invalid_argument("collective_transform: num_ions must be 2 or 3");
  CollectiveModeSpec spec;
  spec.num_ions = p.num_ions;
  const double s2 = std::sqrt(2.0);
  if (p.num_ions == 2) {
    spec.labels = {"com", "rock"};
    spec.frequencies = {p.delta + p.kappa, p.delta - p.kappa};
    spec.vectors.resize(2, 2);
    spec.vectors << 1.0 / s2, 1.0 / s2, 1.0 / s2, -1.0 / s2;
  } else {
    spec.labels = {"com", "rock", "egypt"};
    spec.frequencies = {p.delta + s2 * p.kappa, p.delta - s2 * p.kappa, p.delta};
    spec.vectors.resize(3, 3);
    spec.vectors << 0.5, 0.5, -1.0 / s2,  //
        1.0 / s2, -1.0 / s2, 0.0,         //
        0.5, 0.5, 1.0 / s2;
  }
  for (double w : spec.frequencies) {
    if (!(w > 0.0)) {
      std::ostringstream os;
      os << "collective mode frequency " << w << " krad/s is not positive (delta too small for kappa)";
      throw DomainError(os.str());
    }
  }
  if (static_cast<int>(p.g.size()) == p.num_ions) {
    // Coefficient of sigma_j sigma_k after eliminating every collective mode.
    auto coupling = [&](int j, int k) {
      double c = 0.0;
      for (int q = 0; q < p.num_ions; ++q) {
        c -= 2.0 * p.g[j] * p.g[k] * spec.vectors(j, q) * spec.vectors(k, q) / spec.frequencies[q];
      }
      return c;
    };
    spec.j_coupling = coupling(0, 1);
    if (p.num_ions == 3) spec.j_prime = -coupling(0, 2);
  }
  return spec;
}

OperatorMatrix build_hopping(const ProbeParams& p, const BasisDescriptor& basis) {
  OperatorMatrix h = OperatorMatrix::zero(basis);
  for (int j = 0; j < p.num_ions; ++j) h += p.delta * hilbert::number_op(basis, j);
  for (auto [i, j] : hopping_bonds(p.num_ions)) {
    const OperatorMatrix hop = hilbert::creation_op(basis, i) * hilbert::annihilation_op(basis, j);
    h += p.kappa * (hop + hop.adjoint());
  }
  return h;
}

OperatorMatrix build_drive_unit(const ProbeParams& p) {
  const BasisDescriptor basis = p.basis();
  OperatorMatrix h = OperatorMatrix::zero(basis);
  for (int j = 0; j < p.num_ions; ++j) h += 0.5 * hilbert::pauli_op(basis, j, Axis::x);
  return h;
}

OperatorMatrix build_spin_phonon(const ProbeParams& p) {
  const BasisDescriptor basis = p.basis();
  OperatorMatrix h = OperatorMatrix::zero(basis);
  for (int j = 0; j < p.num_ions; ++j) {
    const cplx phase = std::exp(I * p.phi[j]);
    const OperatorMatrix quad =
        phase * hilbert::creation_op(basis, j) + std::conj(phase) * hilbert::annihilation_op(basis, j);
    h += p.g[j] * (quad * hilbert::pauli_op(basis, j, Axis::z));
  }
  return h;
}

OperatorMatrix build_rabi_lattice(const ProbeParams& p, double t) {
  p.validate();
  return build_hopping(p, p.basis()) + p.drive_at(t) * build_drive_unit(p) + build_spin_phonon(p);
}

TimeDependentHamiltonian rabi_lattice_hamiltonian(const ProbeParams& p) {
  p.validate();
  TimeDependentHamiltonian h(build_hopping(p, p.basis()) + build_spin_phonon(p));
  if (p.gamma == 0.0) {
    h.add_static(p.omega0 * build_drive_unit(p));
  } else {
    h.add_modulated(build_drive_unit(p), [omega0 = p.omega0, gamma = p.gamma](double t) {
      return omega0 * std::exp(-gamma * t);
    });
  }
  return h;
}

OperatorMatrix build_force_term(const BasisDescriptor& basis, const ForceField& f, double x0) {
  const auto rates = f.drive_rates(x0);
  if (static_cast<int>(rates.size()) > basis.num_modes()) {
    throw std::invalid_argument("force field has more entries than local modes");
  }
  OperatorMatrix h = OperatorMatrix::zero(basis);
  const cplx phase = std::exp(I * f.xi);
  for (std::size_t j = 0; j < rates.size(); ++j) {
    if (rates[j] == 0.0) continue;
    const int m = static_cast<int>(j);
    h += rates[j] * (phase * hilbert::creation_op(basis, m) + std::conj(phase) * hilbert::annihilation_op(basis, m));
  }
  return h;
}

OperatorMatrix build_force_term(const ProbeParams& p, const ForceField& f) {
  if (static_cast<int>(f.force.size()) != p.num_ions) {
    throw std::invalid_argument("force field needs one entry per ion");
  }
  return build_force_term(p.basis(), f, p.x0);
}

OperatorMatrix build_magnetic_term(const MagneticField& b, const BasisDescriptor& basis) {
  if (static_cast<int>(b.z_positions.size()) != basis.num_spins()) {
    throw std::invalid_argument("magnetic field needs one position per ion");
  }
  OperatorMatrix h = OperatorMatrix::zero(basis);
  const auto d = b.detunings();
  for (int j = 0; j < basis.num_spins(); ++j) h += d[j] * hilbert::pauli_op(basis, j, Axis::z);
  return h;
}

std::vector<double> collective_zeta_sq(const ProbeParams& p) {
  const auto modes = collective_transform(p);
  const double g = max_abs_g(p);
  std::vector<double> z;
  for (double w : modes.frequencies) z.push_back(4.0 * g * g / (p.omega0 * w));
  return z;
}

BasisDescriptor effective_bosonic_basis(const ProbeParams& p) {
  std::vector<std::string> labels;
  for (int j = 0; j < p.num_ions; ++j) labels.push_back("local-" + std::to_string(j + 1));
  return BasisDescriptor(0, std::vector<int>(static_cast<std::size_t>(p.num_ions), p.n_max), labels);
}

OperatorMatrix build_effective_bosonic(const ProbeParams& p, const ForceField& f) {
  p.validate();
  if (!(p.omega0 > 0.0)) throw DomainError("effective bosonic model needs a nonzero drive");
  for (double z : collective_zeta_sq(p)) {
    if (z >= 1.0) {
      std::ostringstream os;
      os << "zeta_q^2 = " << z << " >= 1: beyond critical coupling, the bosonic model is unstable";
      throw DomainError(os.str());
    }
  }
  const BasisDescriptor basis = effective_bosonic_basis(p);
  OperatorMatrix h = OperatorMatrix::zero(basis);
  for (int j = 0; j < p.num_ions; ++j) {
    const double g2 = p.g[j] * p.g[j] / p.omega0;
    const OperatorMatrix a = hilbert::annihilation_op(basis, j);
    const OperatorMatrix ad = hilbert::creation_op(basis, j);
    // delta~ = delta (1 - zeta^2 / 2) = delta - 2 g^2 / Omega
    h += (p.delta - 2.0 * g2) * hilbert::number_op(basis, j);
    const cplx phase = std::exp(2.0 * I * p.phi[j]);
    h -= g2 * (phase * (ad * ad) + std::conj(phase) * (a * a));
  }
  for (auto [i, j] : hopping_bonds(p.num_ions)) {
    const OperatorMatrix hop = hilbert::creation_op(basis, i) * hilbert::annihilation_op(basis, j);
    h += p.kappa * (hop + hop.adjoint());
  }
  h += build_force_term(basis, f, p.x0);
  return h;
}

OperatorMatrix parity_symmetry(const BasisDescriptor& basis) {
  OperatorMatrix p = OperatorMatrix::identity(basis);
  for (int j = 0; j < basis.num_spins(); ++j) p = p * hilbert::pauli_op(basis, j, Axis::x);
  for (int q = 0; q < basis.num_modes(); ++q) p = p * hilbert::parity_op(basis, q);
  return p;
}

OperatorMatrix collective_annihilation(const BasisDescriptor& basis, const CollectiveModeSpec& modes, int mode) {
  OperatorMatrix a = OperatorMatrix::zero(basis);
  for (int j = 0; j < modes.num_ions; ++j) {
    const double v = modes.vectors(j, mode);
    if (v != 0.0) a += v * hilbert::annihilation_op(basis, j);
  }
  return a;
}

}  // namespace models
}  // namespace gradsense
