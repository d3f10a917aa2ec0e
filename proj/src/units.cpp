#include "gradsense/units.hpp"

namespace gradsense::units {

double force_drive_rate(double force_newton, double x0_metre) {
  return from_rad_per_s(force_newton * x0_metre / (2.0 * hbar));
}

double force_from_drive_rate(double rate_krad_s, double x0_metre) {
  return to_rad_per_s(rate_krad_s) * 2.0 * hbar / x0_metre;
}

double magnetic_coupling(double lande_g) { return lande_g * bohr_magneton / hbar; }

}  // namespace gradsense::units
