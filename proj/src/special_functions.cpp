#include "gradsense/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "gradsense/diagnostics.hpp"

namespace gradsense::special {

namespace {

// B_{2k} for k = 1..10.
constexpr std::array<double, 10> kBernoulli = {
    1.0 / 6.0,     -1.0 / 30.0,  1.0 / 42.0,        -1.0 / 30.0,      5.0 / 66.0,
    -691.0 / 2730.0, 7.0 / 6.0,  -3617.0 / 510.0,   43867.0 / 798.0,  -174611.0 / 330.0};

constexpr double kShiftThreshold = 10.0;

void check_pole(cplx z, const char* what) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
    throw DomainError(std::string(what) + ": argument is a pole (nonpositive integer)");
  }
}

cplx stirling_log_gamma(cplx w) {
  const cplx inv = 1.0 / w;
  const cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx power = inv;
  for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
    const double n = 2.0 * static_cast<double>(k + 1);
    series += kBernoulli[k] / (n * (n - 1.0)) * power;
    power *= inv2;
  }
  return (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

cplx asymptotic_digamma(cplx w) {
  const cplx inv = 1.0 / w;
  const cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx power = inv2;
  for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
    const double n = 2.0 * static_cast<double>(k + 1);
    series += kBernoulli[k] / n * power;
    power *= inv2;
  }
  return std::log(w) - 0.5 * inv - series;
}

}  // namespace

cplx complex_log_gamma(cplx z) {
  check_pole(z, "complex_log_gamma");
  cplx shift_log = 0.0;
  while (z.real() < kShiftThreshold) {
    shift_log += std::log(z);
    z += 1.0;
  }
  return stirling_log_gamma(z) - shift_log;
}

cplx complex_gamma(cplx z) { return std::exp(complex_log_gamma(z)); }

cplx complex_digamma(cplx z) {
  check_pole(z, "complex_digamma");
  cplx shift = 0.0;
  while (z.real() < kShiftThreshold) {
    shift += 1.0 / z;
    z += 1.0;
  }
  return asymptotic_digamma(z) - shift;
}

BesselValue bessel_j(cplx nu, double y) {
  if (y < 0.0) throw DomainError("bessel_j: negative argument");
  // Negative integer order: J_{-n} = (-1)^n J_n.
  if (nu.imag() == 0.0 && nu.real() < 0.0 && nu.real() == std::floor(nu.real())) {
    BesselValue v = bessel_j(-nu, y);
    if (static_cast<long long>(-nu.real()) % 2 != 0) v.value = -v.value;
    return v;
  }
  if (y == 0.0) return {nu == cplx{0.0, 0.0} ? cplx{1.0} : cplx{0.0}, 0.0};

  using lcplx = std::complex<long double>;
  const cplx log_prefactor = nu * std::log(0.5 * y) - complex_log_gamma(nu + 1.0);
  const lcplx lnu{nu.real(), nu.imag()};
  const long double q = -0.25L * static_cast<long double>(y) * static_cast<long double>(y);

  lcplx term = 1.0L;
  lcplx sum = term;
  long double abs_sum = 1.0L;
  for (int k = 1; k < 2000; ++k) {
    term *= q / (static_cast<long double>(k) * (lnu + static_cast<long double>(k)));
    sum += term;
    abs_sum += std::abs(term);
    if (std::abs(term) < std::numeric_limits<long double>::epsilon() * std::abs(sum) &&
        static_cast<long double>(k) > 0.5L * static_cast<long double>(y)) {
      break;
    }
  }
  const cplx prefactor = std::exp(log_prefactor);
  const cplx value = prefactor * cplx(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
  const double bound = std::abs(prefactor) *
                       (static_cast<double>(abs_sum) * 64.0 * static_cast<double>(std::numeric_limits<long double>::epsilon()) +
                        std::abs(value / prefactor) * 4.0 * std::numeric_limits<double>::epsilon());
  return {value, bound};
}

}  // namespace gradsense::special
