#pragma once

// Closed-form signals, sensitivities and Fisher informations of the two
// sensing protocols. Forces are in N, gradients in T/m, frequencies in krad/s
// and times in ms; conversions go through gradsense::units.

#include <complex>
#include <string>
#include <utility>

#include "gradsense/models.hpp"

namespace gradsense::analytic {

using cplx = std::complex<double>;

// ---- adiabatic protocol ------------------------------------------------

struct SpinSignal {
  double p_up = 0.5;     ///< population of |up> on ion 1
  double sigma1z = 0.0;  ///< 2 p_up - 1
  double argument = 0.0; ///< argument of the tanh
};

/// Half-splitting of the two ground-manifold states produced by the force
/// (the Demkov asymmetry), in krad/s. N = 2 uses F1 - F2, N = 3 uses
/// F1 - sqrt(2) F2 + F3. Throws DomainError for nonpositive omega_r.
double force_asymmetry(const models::ProbeParams& p, const models::ForceField& f);

SpinSignal adiabatic_signal_force(const models::ProbeParams& p, const models::ForceField& f);

enum class SpinOrder { antiferro, ferro };

/// Antiferro: <s1z> = tanh(pi (dB2 - dB1) / 2 gamma) = tanh(pi lambda B' (z2 - z1) / 2 gamma),
/// independent of B0. Ferro: <s1z> = -tanh(pi (dB1 + dB2) / 2 gamma).
double adiabatic_signal_magnetic(const models::ProbeParams& p, const models::MagneticField& b, SpinOrder order);

/// Force difference giving unit SNR in the adiabatic protocol [N] (phi = xi).
double min_detectable_force_adiabatic(const models::ProbeParams& p);
/// Gradient giving unit SNR [T/m]; gamma in krad/s, dz in m.
double min_detectable_gradient(double gamma, double dz, double lande_g = 2.0);
/// Force on collective mode q giving SNR = 1 at t_* [N].
double min_detectable_force_cho(double omega_q, double zeta_sq, double x0);

enum class Estimand { force, phase };

/// Fisher information of the two-outcome spin measurement: w.r.t. F_- [1/N^2]
/// or the force phase xi [1/rad^2].
double classical_fisher(const models::ProbeParams& p, const models::ForceField& f, Estimand which);

// ---- two-state exponential-coupling model -------------------------------

struct DemkovClosedForm {
  double alpha = 0.0;  ///< asymmetry [krad/s]
  double gamma = 0.0;  ///< [krad/s]
  double x = 0.0;      ///< Delta_c / 2 gamma

  cplx beta() const { return {0.5, alpha / (2.0 * gamma)}; }
  double p() const { return alpha / (2.0 * gamma); }
  double delta_c0() const { return 2.0 * gamma * x; }
  /// (x/2) e^{-2 gamma t}
  double z(double t) const;
};

/// Two-state parameters of a probe run. Delta_c = Omega(0)^2/(4|J|) times the
/// Franck-Condon factor exp(-|alpha_c|^2 - |alpha_r|^2) when requested.
DemkovClosedForm demkov_parameters(const models::ProbeParams& p, const models::ForceField& f,
                                   bool franck_condon = true);

enum class DemkovForm { bessel, asymptotic };

/// (c_plus(t), c_minus(t)) for initial amplitudes c0. The Bessel form is
/// exact but limited to x <= 50 (throws DomainError beyond, or when the
/// series loses more than 1e-8 to cancellation); the asymptotic form needs
/// x >> 1 and t >> 1/gamma.
std::pair<cplx, cplx> demkov_closed_amplitudes(const DemkovClosedForm& d, double t, DemkovForm form,
                                               std::pair<cplx, cplx> c0 = {M_SQRT1_2, M_SQRT1_2});

/// QFI of the final two-state superposition w.r.t. the dimensionless
/// asymmetry p = alpha / 2 gamma:
/// [pi^2 + 4 (ln z - Re Psi(beta))^2] / cosh^2(pi p).
double qfi_demkov_p(const DemkovClosedForm& d, double t_f);

/// QFI w.r.t. F_- [1/N^2] or xi [1/rad^2] of the adiabatic protocol; the
/// chain rule on qfi_demkov_p.
double qfi_adiabatic(const models::ProbeParams& p, const models::ForceField& f, double t_f, Estimand which,
                     bool franck_condon = true);

/// Same pair for the gradient B' of an antiferro two-ion run [1/(T/m)^2].
double classical_fisher_gradient(const models::ProbeParams& p, const models::MagneticField& b);
double qfi_adiabatic_gradient(const models::ProbeParams& p, const models::MagneticField& b, double t_f,
                              bool franck_condon = true);

// ---- strong-coupling oscillator protocol --------------------------------

struct SqueezeDisplaceParams {
  std::string mode;        ///< com, rock
  double omega_q = 0.0;    ///< [krad/s]
  double zeta_sq = 0.0;
  double nu = 0.0;         ///< -ln(1 - zeta^2) / 4
  cplx alpha;              ///< |alpha| e^{i Phi}
  double theta = 0.0;      ///< omega_q sqrt(1 - zeta^2) [krad/s]
  double t_star = 0.0;     ///< pi / theta [ms]
  double force = 0.0;      ///< F_q [N]
  double xi_minus_phi = 0.0;
  double x0 = 0.0;         ///< [m]
};

/// mode 0 = com (F1 + F2), mode 1 = rock (F1 - F2). Throws DomainError when
/// zeta_q^2 >= 1.
SqueezeDisplaceParams squeeze_displace_params(const models::ProbeParams& p, const models::ForceField& f, int mode);

/// <a_q^dagger a_q>(t) from the phonon vacuum:
/// |alpha|^2 [(1-c)^2 + s^2 (cosh 4nu - cos 2Phi sinh 4nu) - 2 sin 2Phi sinh 2nu (1-c) s] + sinh^2 2nu s^2
/// with c = cos(theta t), s = sin(theta t).
double mean_phonon_signal(const SqueezeDisplaceParams& sd, double t);
/// Time-independent part of mean_phonon_signal.
double mean_phonon_constant(const SqueezeDisplaceParams& sd);

struct KappaStar {
  double x = 0.0;       ///< kappa / delta
  double kappa = 0.0;   ///< [krad/s]
  double residual = 0.0;  ///< defining equation at the root
  double t_star = 0.0;  ///< k_c pi / theta_c [ms]
  double t_star_mismatch = 0.0;  ///< |k_c pi / theta_c - k_r pi / theta_r| [ms]
};

/// Hopping for which com and rock reach odd multiples k_c pi and k_r pi at
/// the same time: (1-x)(1-x-zeta^2) = (k_r/k_c)^2 (1+x)(1+x-zeta^2), zeta^2 = 4g^2/(Omega delta).
KappaStar kappa_star_solve(double delta, double zeta_sq, int k_c, int k_r);

/// Value that may diverge at critical coupling.
struct TaggedValue {
  double value = 0.0;
  bool diverges = false;
  std::string note;
};

/// Threshold on zeta_q^2 above which qfi_cho reports divergence.
inline constexpr double kCriticalMargin = 1e-9;

/// QFI at t_*: 16 |d alpha_q / d lambda|^2 for lambda = F_q [1/N^2] or xi [1/rad^2].
/// phi and xi override the phases stored in sd.
TaggedValue qfi_cho(const SqueezeDisplaceParams& sd, Estimand which, double phi, double xi);

}  // namespace gradsense::analytic
