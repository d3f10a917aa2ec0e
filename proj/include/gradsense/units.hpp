#pragma once

// Internal unit system: hbar = 1, angular frequencies in krad/s, times in ms.
// SI quantities (forces in N, lengths in m, fields in T) are converted here
// and nowhere else.

#include <numbers>

namespace gradsense::units {

inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double bohr_magneton = 9.2740100783e-24;  // J/T
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg

inline constexpr double pi = std::numbers::pi;

inline constexpr double yocto_newton = 1e-24;
inline constexpr double nanometre = 1e-9;
inline constexpr double micrometre = 1e-6;
inline constexpr double tesla_per_micrometre = 1e6;  // in T/m

/// rad/s -> krad/s
constexpr double from_rad_per_s(double w) { return w * 1e-3; }
/// krad/s -> rad/s
constexpr double to_rad_per_s(double w) { return w * 1e3; }
/// A true SI frequency in Hz (cycles per second) -> krad/s.
constexpr double from_hertz(double f) { return 2.0 * pi * f * 1e-3; }

/// Drive rate F x0 / (2 hbar) of a force kick, in krad/s.
double force_drive_rate(double force_newton, double x0_metre);
/// Inverse of force_drive_rate.
double force_from_drive_rate(double rate_krad_s, double x0_metre);

/// Magnetic coupling lambda = gJ muB / hbar in rad s^-1 T^-1.
double magnetic_coupling(double lande_g);

}  // namespace gradsense::units
