#pragma once

// Parameter sets and Hamiltonian builders for the trapped-ion Rabi lattice.
// All builders work in internal units (hbar = 1, krad/s, ms); SI inputs are
// converted through gradsense::units.

#include <optional>
#include <string>
#include <vector>

#include "gradsense/hamiltonian.hpp"
#include "gradsense/hilbert.hpp"

namespace gradsense::models {

struct ProbeParams {
  int num_ions = 2;
  double omega0 = 0.0;  ///< drive amplitude Omega(0) [krad/s]
  double gamma = 0.0;   ///< sweep slope [krad/s]; 0 keeps the drive constant
  double delta = 0.0;   ///< effective phonon detuning [krad/s]
  double kappa = 0.0;   ///< hopping [krad/s]
  std::vector<double> g;    ///< spin-phonon couplings [krad/s]
  std::vector<double> phi;  ///< laser phases [rad]
  double x0 = 14.5e-9;      ///< ground-state length [m]
  int n_max = 12;           ///< Fock truncation per local mode

  /// Throws DomainError / std::invalid_argument on inconsistent parameters.
  void validate() const;
  double drive_at(double t) const;
  /// num_ions spins and num_ions local modes labelled local-1, local-2, ...
  hilbert::BasisDescriptor basis() const;
  /// Same parameters with every coupling/phase set to a uniform value.
  static ProbeParams uniform(int num_ions, double omega0, double gamma, double delta, double kappa, double g,
                             double phi, double x0, int n_max);
};

struct ForceField {
  std::vector<double> force;  ///< F_j [N]; signed values allowed
  double xi = 0.0;            ///< force phase [rad]

  /// Build from drive rates eps_j = F_j x0 / 2 hbar given in krad/s.
  static ForceField from_drive_rates(const std::vector<double>& rates, double xi, double x0);
  std::vector<double> drive_rates(double x0) const;
};

struct MagneticField {
  double b0 = 0.0;                   ///< offset [T]
  double b_prime = 0.0;              ///< gradient [T/m]
  std::vector<double> z_positions;   ///< equilibrium positions [m]
  double lande_g = 2.0;

  double lambda() const;  ///< gJ muB / hbar [rad s^-1 T^-1]
  /// delta B_j = lambda B0 + lambda B' z_j in krad/s.
  std::vector<double> detunings() const;
};

struct TrapGeometry {
  double mass = 0.0;     ///< [kg]
  double charge = 0.0;   ///< [C]
  double omega_x = 0.0;  ///< radial trap frequency [rad/s]
  double dz = 0.0;       ///< ion spacing [m]
};

enum class CoulombConvention { si, gaussian };

/// Hopping kappa = e^2 / (2 m omega_x |dz|^3) in krad/s. The SI variant
/// includes 1/(4 pi eps0); the Gaussian variant evaluates the bare formula in
/// CGS units, which describes the same physics.
double hopping_from_trap(const TrapGeometry& trap, CoulombConvention convention = CoulombConvention::si);

struct CollectiveModeSpec {
  int num_ions = 2;
  std::vector<std::string> labels;    ///< com, rock(, egypt)
  std::vector<double> frequencies;    ///< omega_q [krad/s] in label order
  /// Column q holds the local amplitudes of mode q: a_j = sum_q V(j, q) a_q.
  Eigen::MatrixXd vectors;
  double j_coupling = 0.0;               ///< nearest-neighbour spin-spin coupling J
  std::optional<double> j_prime;         ///< N = 3 next-neighbour coupling J' (enters as -J' s1 s3)

  double omega_c() const { return frequencies.at(0); }
  double omega_r() const { return frequencies.at(1); }
};

CollectiveModeSpec collective_transform(const ProbeParams& p);

/// delta * n_j plus nearest-neighbour hopping.
hilbert::OperatorMatrix build_hopping(const ProbeParams& p, const hilbert::BasisDescriptor& basis);
/// (1/2) sum_j sigma_j^x, the drive term per unit Omega.
hilbert::OperatorMatrix build_drive_unit(const ProbeParams& p);
hilbert::OperatorMatrix build_spin_phonon(const ProbeParams& p);

/// H_RL(t) = H_x + (Omega(t)/2) sum sigma^x + sum g_j (e^{i phi_j} a^dagger_j + h.c.) sigma^z_j.
hilbert::OperatorMatrix build_rabi_lattice(const ProbeParams& p, double t);
/// The same Hamiltonian with the drive kept as a time-dependent envelope.
TimeDependentHamiltonian rabi_lattice_hamiltonian(const ProbeParams& p);

/// Force kick on the local modes of p.basis().
hilbert::OperatorMatrix build_force_term(const ProbeParams& p, const ForceField& f);
/// Force kick on an arbitrary basis whose first num_ions modes are the local modes.
hilbert::OperatorMatrix build_force_term(const hilbert::BasisDescriptor& basis, const ForceField& f, double x0);

hilbert::OperatorMatrix build_magnetic_term(const MagneticField& b, const hilbert::BasisDescriptor& basis);

/// zeta_q^2 = 4 g^2 / (Omega omega_q) for each collective mode, using the
/// largest |g_j|.
std::vector<double> collective_zeta_sq(const ProbeParams& p);

/// Boson-only Hamiltonian obtained for spins frozen in |- - ...>, to order
/// g^2/Omega. Basis: 0 spins, num_ions local modes with truncation n_max.
/// Throws DomainError when any collective zeta_q^2 >= 1.
hilbert::OperatorMatrix build_effective_bosonic(const ProbeParams& p, const ForceField& f);
hilbert::BasisDescriptor effective_bosonic_basis(const ProbeParams& p);

/// Joint parity prod_j sigma^x_j times prod_q exp(i pi n_q).
hilbert::OperatorMatrix parity_symmetry(const hilbert::BasisDescriptor& basis);

/// Collective annihilation operator a_q = sum_j V(j, q) a_j on `basis`.
hilbert::OperatorMatrix collective_annihilation(const hilbert::BasisDescriptor& basis, const CollectiveModeSpec& modes,
                                                int mode);

}  // namespace gradsense::models
