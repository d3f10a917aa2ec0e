#include "gradsense/analytic.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "gradsense/diagnostics.hpp"
#include "gradsense/special_functions.hpp"
#include "gradsense/units.hpp"

namespace gradsense::analytic {

namespace {

const cplx I{0.0, 1.0};
const double kAsinh1 = std::asinh(1.0);

double rock_frequency(const models::ProbeParams& p) {
  const double w = p.num_ions == 2 ? p.delta - p.kappa : p.delta - std::sqrt(2.0) * p.kappa;
  if (!(w > 0.0)) throw DomainError("rocking-mode frequency must be positive");
  return w;
}

// Weighted force difference seen by the ground manifold, as a drive rate.
double difference_rate(const models::ProbeParams& p, const models::ForceField& f) {
  const auto eps = f.drive_rates(p.x0);
  if (static_cast<int>(eps.size()) != p.num_ions) throw std::invalid_argument("force field needs one entry per ion");
  if (p.num_ions == 2) return eps[0] - eps[1];
  return eps[0] - std::sqrt(2.0) * eps[1] + eps[2];
}

// d alpha / d eps_- at phi = xi.
double asymmetry_per_rate(const models::ProbeParams& p) {
  const double wr = rock_frequency(p);
  return p.num_ions == 2 ? 2.0 * p.g.at(0) / wr : 4.0 * p.g.at(0) / (3.0 * wr);
}

double phase_offset(const models::ProbeParams& p, const models::ForceField& f) { return p.phi.at(0) - f.xi; }

}  // namespace

double force_asymmetry(const models::ProbeParams& p, const models::ForceField& f) {
  return asymmetry_per_rate(p) * std::cos(phase_offset(p, f)) * difference_rate(p, f);
}

SpinSignal adiabatic_signal_force(const models::ProbeParams& p, const models::ForceField& f) {
  if (!(p.gamma > 0.0)) throw DomainError("adiabatic signal needs gamma > 0");
  SpinSignal s;
  s.argument = units::pi * force_asymmetry(p, f) / (2.0 * p.gamma);
  s.sigma1z = std::tanh(s.argument);
  s.p_up = 0.5 * (1.0 + s.sigma1z);
  return s;
}

double adiabatic_signal_magnetic(const models::ProbeParams& p, const models::MagneticField& b, SpinOrder order) {
  if (!(p.gamma > 0.0)) throw DomainError("adiabatic signal needs gamma > 0");
  if (b.z_positions.size() != 2) throw std::invalid_argument("magnetic signal is defined for two ions");
  const double lambda_krad = units::from_rad_per_s(b.lambda());
  if (order == SpinOrder::antiferro) {
    // dB2 - dB1; the offset cancels identically
    const double asym = lambda_krad * b.b_prime * (b.z_positions[1] - b.z_positions[0]);
    return std::tanh(units::pi * asym / (2.0 * p.gamma));
  }
  const auto d = b.detunings();
  return -std::tanh(units::pi * (d[0] + d[1]) / (2.0 * p.gamma));
}

double min_detectable_force_adiabatic(const models::ProbeParams& p) {
  if (!(p.gamma > 0.0) || p.g.empty() || p.g[0] == 0.0) throw DomainError("need gamma > 0 and g != 0");
  // pi alpha / 2 gamma = asinh(1) with alpha = asymmetry_per_rate * eps
  const double eps = 2.0 * p.gamma * kAsinh1 / (units::pi * std::abs(asymmetry_per_rate(p)));
  return units::force_from_drive_rate(eps, p.x0);
}

double min_detectable_gradient(double gamma, double dz, double lande_g) {
  if (!(gamma > 0.0) || dz == 0.0) throw DomainError("need gamma > 0 and dz != 0");
  return 2.0 * units::to_rad_per_s(gamma) * kAsinh1 / (units::pi * units::magnetic_coupling(lande_g) * std::abs(dz));
}

double min_detectable_force_cho(double omega_q, double zeta_sq, double x0) {
  if (!(omega_q > 0.0) || !(x0 > 0.0)) throw DomainError("need omega_q > 0 and x0 > 0");
  if (zeta_sq < 0.0 || zeta_sq >= 1.0) throw DomainError("zeta^2 must lie in [0, 1)");
  return std::sqrt(2.0) * units::hbar * units::to_rad_per_s(omega_q) * (1.0 - zeta_sq) / x0;
}

double classical_fisher(const models::ProbeParams& p, const models::ForceField& f, Estimand which) {
  const SpinSignal s = adiabatic_signal_force(p, f);
  // p_up = (1 + tanh a)/2  =>  (dp/da)^2 / p(1-p) = sech^2 a
  const double sech2 = 1.0 / std::pow(std::cosh(s.argument), 2);
  const double scale = units::pi / (2.0 * p.gamma);
  double da = 0.0;
  if (which == Estimand::force) {
    // d eps_- / d F_- = x0 / 2 hbar in krad/s per N
    const double rate_per_newton = units::force_drive_rate(1.0, p.x0);
    da = scale * asymmetry_per_rate(p) * std::cos(phase_offset(p, f)) * rate_per_newton;
  } else {
    da = scale * asymmetry_per_rate(p) * std::sin(phase_offset(p, f)) * difference_rate(p, f);
  }
  return sech2 * da * da;
}

// ---- two-state model ----------------------------------------------------

double DemkovClosedForm::z(double t) const { return 0.5 * x * std::exp(-2.0 * gamma * t); }

DemkovClosedForm demkov_parameters(const models::ProbeParams& p, const models::ForceField& f, bool franck_condon) {
  const auto modes = models::collective_transform(p);
  const double j = std::abs(modes.j_coupling);
  if (!(j > 0.0)) throw DomainError("spin-spin coupling vanishes");
  if (!(p.gamma > 0.0)) throw DomainError("need gamma > 0");
  double delta_c = p.omega0 * p.omega0 / (4.0 * j);
  if (franck_condon) {
    const double g = p.g.at(0);
    const double c = p.num_ions == 2 ? std::sqrt(2.0) : 2.0;
    const double ac = c * g / modes.omega_c();
    const double ar = c * g / modes.omega_r();
    delta_c *= std::exp(-ac * ac - ar * ar);
  }
  DemkovClosedForm d;
  d.alpha = force_asymmetry(p, f);
  d.gamma = p.gamma;
  d.x = delta_c / (2.0 * p.gamma);
  return d;
}

std::pair<cplx, cplx> demkov_closed_amplitudes(const DemkovClosedForm& d, double t, DemkovForm form,
                                               std::pair<cplx, cplx> c0) {
  if (!(d.gamma > 0.0) || !(d.x > 0.0)) throw DomainError("need gamma > 0 and x > 0");
  const cplx beta = d.beta();
  const double p = d.p();
  const auto [cp0, cm0] = c0;

  if (form == DemkovForm::bessel) {
    if (d.x > 50.0) {
      std::ostringstream os;
      os << "Bessel form unsupported for x = " << d.x << " > 50; use the asymptotic form or the ODE";
      throw DomainError(os.str());
    }
    auto J = [](cplx nu, double y) {
      const auto v = special::bessel_j(nu, y);
      if (v.error_bound > 1e-8 * std::max(1.0, std::abs(v.value))) {
        throw DomainError("Bessel series lost too many digits to cancellation");
      }
      return v.value;
    };
    // Initial conditions at y = x fix A and B; the determinant follows from
    // J_nu J_{1-nu} + J_{-nu} J_{nu-1} = 2 sin(nu pi) / (pi y).
    const double x = d.x;
    const double sx = std::sqrt(x);
    const cplx det = -2.0 * I * std::sin(beta * units::pi) / units::pi;
    const cplx a = (-I * sx * J(1.0 - beta, x) * cp0 - sx * J(-beta, x) * cm0) / det;
    const cplx b = (sx * J(beta, x) * cm0 - I * sx * J(beta - 1.0, x) * cp0) / det;
    const double y = x * std::exp(-2.0 * d.gamma * t);
    const double sy = std::sqrt(y);
    const cplx cp = sy * (a * J(beta, y) + b * J(-beta, y));
    const cplx cm = I * sy * (a * J(beta - 1.0, y) - b * J(1.0 - beta, y));
    return {cp, cm};
  }

  // Large-argument Bessel asymptotics at t = 0, small-argument ones at t.
  const double theta = d.x - units::pi / 4.0;
  const cplx up = theta + beta * units::pi / 2.0;
  const cplx um = theta - beta * units::pi / 2.0;
  const double ch = std::cosh(units::pi * p);
  const double r = std::sqrt(units::pi / 2.0);
  const cplx a = r * (cp0 * std::sin(up) - I * cm0 * std::cos(up)) / ch;
  const cplx b = I * r * (cm0 * std::cos(um) + I * cp0 * std::sin(um)) / ch;
  const double lz = std::log(d.z(t));
  const cplx zp = std::exp(I * p * lz);  // z^{ip}
  const cplx cp = std::sqrt(2.0) * b * std::conj(zp) / special::complex_gamma(1.0 - beta);
  const cplx cm = I * std::sqrt(2.0) * a * zp / special::complex_gamma(beta);
  return {cp, cm};
}

double qfi_demkov_p(const DemkovClosedForm& d, double t_f) {
  const double l = std::log(d.z(t_f)) - special::complex_digamma(d.beta()).real();
  return (units::pi * units::pi + 4.0 * l * l) / std::pow(std::cosh(units::pi * d.p()), 2);
}

double qfi_adiabatic(const models::ProbeParams& p, const models::ForceField& f, double t_f, Estimand which,
                     bool franck_condon) {
  const DemkovClosedForm d = demkov_parameters(p, f, franck_condon);
  double dp = 0.0;
  if (which == Estimand::force) {
    dp = asymmetry_per_rate(p) * std::cos(phase_offset(p, f)) * units::force_drive_rate(1.0, p.x0) / (2.0 * p.gamma);
  } else {
    dp = asymmetry_per_rate(p) * std::sin(phase_offset(p, f)) * difference_rate(p, f) / (2.0 * p.gamma);
  }
  return dp * dp * qfi_demkov_p(d, t_f);
}

// ---- oscillator protocol -------------------------------------------------

namespace {

// d(alpha/2 gamma)/dB' for the antiferro pair
double gradient_slope(const models::ProbeParams& p, const models::MagneticField& b) {
  if (!(p.gamma > 0.0)) throw DomainError("adiabatic signal needs gamma > 0");
  if (b.z_positions.size() != 2) throw std::invalid_argument("magnetic signal is defined for two ions");
  return units::from_rad_per_s(b.lambda()) * (b.z_positions[1] - b.z_positions[0]) / (2.0 * p.gamma);
}

}  // namespace

double classical_fisher_gradient(const models::ProbeParams& p, const models::MagneticField& b) {
  const double s = adiabatic_signal_magnetic(p, b, SpinOrder::antiferro);
  const double da = units::pi * gradient_slope(p, b);
  return (1.0 - s * s) * da * da;
}

double qfi_adiabatic_gradient(const models::ProbeParams& p, const models::MagneticField& b, double t_f,
                              bool franck_condon) {
  DemkovClosedForm d = demkov_parameters(p, models::ForceField{std::vector<double>(2, 0.0), 0.0}, franck_condon);
  const double slope = gradient_slope(p, b);
  d.alpha = 2.0 * p.gamma * slope * b.b_prime;
  return slope * slope * qfi_demkov_p(d, t_f);
}

SqueezeDisplaceParams squeeze_displace_params(const models::ProbeParams& p, const models::ForceField& f, int mode) {
  if (p.num_ions != 2) throw std::invalid_argument("squeeze_displace_params is defined for two ions");
  if (mode != 0 && mode != 1) throw std::invalid_argument("mode must be 0 (com) or 1 (rock)");
  if (!(p.omega0 > 0.0)) throw DomainError("need a nonzero drive");
  const auto modes = models::collective_transform(p);
  SqueezeDisplaceParams sd;
  sd.mode = modes.labels[static_cast<std::size_t>(mode)];
  sd.omega_q = modes.frequencies[static_cast<std::size_t>(mode)];
  const double g = p.g.at(0);
  sd.zeta_sq = 4.0 * g * g / (p.omega0 * sd.omega_q);
  if (sd.zeta_sq >= 1.0) {
    std::ostringstream os;
    os << "zeta^2 = " << sd.zeta_sq << " >= 1 for the " << sd.mode << " mode: critical coupling";
    throw DomainError(os.str());
  }
  sd.nu = -0.25 * std::log1p(-sd.zeta_sq);
  sd.theta = sd.omega_q * std::sqrt(1.0 - sd.zeta_sq);
  sd.t_star = units::pi / sd.theta;
  sd.force = mode == 0 ? f.force.at(0) + f.force.at(1) : f.force.at(0) - f.force.at(1);
  sd.xi_minus_phi = f.xi - p.phi.at(0);
  sd.x0 = p.x0;
  const double a0 = units::force_drive_rate(sd.force, p.x0) / (std::sqrt(2.0) * sd.omega_q);
  sd.alpha = a0 * cplx(std::cos(sd.xi_minus_phi) / (1.0 - sd.zeta_sq), std::sin(sd.xi_minus_phi));
  return sd;
}

double mean_phonon_signal(const SqueezeDisplaceParams& sd, double t) {
  const double c = std::cos(sd.theta * t);
  const double s = std::sin(sd.theta * t);
  const double a2 = std::norm(sd.alpha);
  const double phi2 = 2.0 * std::arg(sd.alpha);
  const double sh2 = std::sinh(2.0 * sd.nu);
  const double bracket = (1.0 - c) * (1.0 - c) + s * s * (std::cosh(4.0 * sd.nu) - std::cos(phi2) * std::sinh(4.0 * sd.nu)) -
                         2.0 * std::sin(phi2) * sh2 * (1.0 - c) * s;
  return a2 * bracket + sh2 * sh2 * s * s;
}

double mean_phonon_constant(const SqueezeDisplaceParams& sd) {
  const double a2 = std::norm(sd.alpha);
  const double phi2 = 2.0 * std::arg(sd.alpha);
  const double sh2 = std::sinh(2.0 * sd.nu);
  return 0.5 * (a2 * std::cosh(4.0 * sd.nu) + sh2 * sh2 + 3.0 * a2) - 0.5 * a2 * std::cos(phi2) * std::sinh(4.0 * sd.nu);
}

KappaStar kappa_star_solve(double delta, double zeta_sq, int k_c, int k_r) {
  if (k_c <= 0 || k_r <= 0 || k_c % 2 == 0 || k_r % 2 == 0) throw DomainError("k_c and k_r must be odd and positive");
  if (k_c <= k_r) throw DomainError("need k_c > k_r");
  if (!(delta > 0.0) || zeta_sq < 0.0 || zeta_sq >= 1.0) throw DomainError("need delta > 0 and zeta^2 in [0, 1)");
  const double r2 = std::pow(static_cast<double>(k_r) / k_c, 2);
  // (1 - r2) x^2 - (2 - z)(1 + r2) x + (1 - z)(1 - r2) = 0
  const double a = 1.0 - r2;
  const double b = (2.0 - zeta_sq) * (1.0 + r2);
  const double c = (1.0 - zeta_sq) * (1.0 - r2);
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) throw DomainError("no real root for kappa_*");
  const double x = 2.0 * c / (b + std::sqrt(disc));
  if (!(x > 0.0 && x < 1.0)) throw DomainError("kappa_* root outside (0, 1)");
  if (x >= 1.0 - zeta_sq) throw DomainError("rocking mode beyond critical coupling at kappa_*");
  KappaStar k;
  k.x = x;
  k.kappa = x * delta;
  k.residual = (1.0 - x) * (1.0 - x - zeta_sq) - r2 * (1.0 + x) * (1.0 + x - zeta_sq);
  const double theta_c = delta * std::sqrt((1.0 + x) * (1.0 + x - zeta_sq));
  const double theta_r = delta * std::sqrt((1.0 - x) * (1.0 - x - zeta_sq));
  k.t_star = k_c * units::pi / theta_c;
  k.t_star_mismatch = std::abs(k.t_star - k_r * units::pi / theta_r);
  return k;
}

TaggedValue qfi_cho(const SqueezeDisplaceParams& sd, Estimand which, double phi, double xi) {
  TaggedValue out;
  if (sd.zeta_sq >= 1.0 - kCriticalMargin) {
    out.value = std::numeric_limits<double>::infinity();
    out.diverges = true;
    out.note = "diverges at critical coupling";
    return out;
  }
  const double th = xi - phi;
  const double one_minus = 1.0 - sd.zeta_sq;
  // alpha = (x0 F / 2 sqrt2 hbar omega) (cos th / (1 - zeta^2) + i sin th)
  const double scale = sd.x0 / (2.0 * std::sqrt(2.0) * units::hbar * units::to_rad_per_s(sd.omega_q));
  cplx d;
  if (which == Estimand::force) {
    d = scale * cplx(std::cos(th) / one_minus, std::sin(th));
  } else {
    d = scale * sd.force * cplx(-std::sin(th) / one_minus, std::cos(th));
  }
  out.value = 16.0 * std::norm(d);
  return out;
}

}  // namespace gradsense::analytic
