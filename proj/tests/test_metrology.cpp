#include <doctest.h>

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "gradsense/analytic.hpp"
#include "gradsense/diagnostics.hpp"
#include "gradsense/dynamics.hpp"
#include "gradsense/metrology.hpp"

using namespace gradsense;
using namespace gradsense::hilbert;
using std::numbers::pi;

namespace {

constexpr int kLevels = 40;

// e^{-i theta n} |alpha>, built from the Poisson amplitudes
Vector phase_shifted_coherent(double theta, cplx alpha) {
  Vector v(kLevels);
  double fact = 1.0;
  for (int n = 0; n < kLevels; ++n) {
    if (n > 0) fact *= n;
    v(n) = std::exp(-0.5 * std::norm(alpha)) * std::pow(alpha, n) / std::sqrt(fact) * std::exp(cplx(0, -theta * n));
  }
  return v;
}

}  // namespace

TEST_SUITE("metrology") {

TEST_CASE("QFI of a phase-shifted coherent state") {
  for (cplx alpha : {cplx(0.7, 0.0), cplx(1.2, -0.5), cplx(0.0, 2.0)}) {
    const auto q = metrology::qfi_numeric([&](double th) { return phase_shifted_coherent(th, alpha); }, 0.3, 1e-3);
    CHECK(q.value == doctest::Approx(4.0 * std::norm(alpha)).epsilon(1e-8));
  }
}

TEST_CASE("QFI of a constant state vanishes") {
  const Vector v = phase_shifted_coherent(0.0, 0.5);
  CHECK(metrology::qfi_numeric([&](double) { return v; }, 0.0, 1e-3).value == doctest::Approx(0.0));
}

TEST_CASE("QFI is gauge invariant") {
  const cplx alpha(0.9, 0.4);
  auto plain = [&](double th) { return phase_shifted_coherent(th, alpha); };
  auto gauged = [&](double th) -> Vector { return std::exp(cplx(0, 3.0 * th * th + 5.0 * th)) * plain(th); };
  const double a = metrology::qfi_numeric(plain, 0.2, 1e-3).value;
  const double b = metrology::qfi_numeric(gauged, 0.2, 1e-3).value;
  CHECK(std::abs(a - b) / a < 1e-6);
}

TEST_CASE("QFI input checks") {
  CHECK_THROWS_AS(metrology::qfi_numeric([](double) { return Vector::Constant(3, 1.0); }, 0.0, 1e-3),
                  std::invalid_argument);
  CHECK_THROWS_AS(metrology::qfi_numeric([](double t) { return phase_shifted_coherent(t, 0.5); }, 0.0, 0.0),
                  std::invalid_argument);
  // derivative blows up at theta0: I(h) and I(h/2) never agree
  auto rough = [](double t) -> Vector {
    Vector v(2);
    const double a = std::cbrt(t);
    v << std::cos(a), std::sin(a);
    return v;
  };
  CHECK_THROWS_AS(metrology::qfi_numeric(rough, 0.0, 1e-4), NumericalError);
}

TEST_CASE("QFI of the two-state model matches the closed form") {
  // asymmetry p = alpha/2gamma is the parameter; x large, gamma t_f = 8
  const double gamma = 0.1, x = 3e3, tf = 80.0;
  for (double p : {0.1, -0.35}) {
    auto provider = [&](double pp) -> Vector {
      const auto r = dynamics::demkov_integrate(2 * gamma * pp, 2 * gamma * x, gamma, tf, {M_SQRT1_2, M_SQRT1_2}, 1, 1e-12);
      Vector v(2);
      v << r.c_plus.back(), r.c_minus.back();
      return v;
    };
    const double num = metrology::qfi_numeric(provider, p, 1e-4).value;
    analytic::DemkovClosedForm d{2 * gamma * p, gamma, x};
    CHECK(num == doctest::Approx(analytic::qfi_demkov_p(d, tf)).epsilon(0.01));
  }
}

TEST_CASE("SLD eigen-decomposition reproduces the QFI") {
  const cplx alpha(0.8, 0.3);
  const double th = 0.4, h = 1e-5;
  const Vector psi = phase_shifted_coherent(th, alpha);
  Vector d = (phase_shifted_coherent(th + h, alpha) - phase_shifted_coherent(th - h, alpha)) / (2 * h);
  d -= psi.dot(d) * psi;  // remove the gauge part
  const auto s = metrology::sld_pure(psi, d);
  CHECK(s.plus.norm() == doctest::Approx(1.0));
  CHECK(s.minus.norm() == doctest::Approx(1.0));
  CHECK(std::abs(s.plus.dot(s.minus)) < 1e-12);
  // tr(rho L^2) = sum_k l_k^2 |<l_k|psi>|^2
  const double tr = s.l_plus * s.l_plus * std::norm(s.plus.dot(psi)) + s.l_minus * s.l_minus * std::norm(s.minus.dot(psi));
  CHECK(tr == doctest::Approx(s.qfi).epsilon(1e-6));
  CHECK(s.qfi == doctest::Approx(4.0 * std::norm(alpha)).epsilon(1e-6));
  // L applied to its eigenvectors
  auto apply_l = [&](const Vector& v) -> Vector { return 2.0 * (psi * d.dot(v) + d * psi.dot(v)); };
  CHECK((apply_l(s.plus) - s.l_plus * s.plus).norm() < 1e-9);
  CHECK((apply_l(s.minus) - s.l_minus * s.minus).norm() < 1e-9);
  // eigenvalues only see <d psi|d psi>: a different parameter value with the same norm gives the same pair
  const Vector psi2 = phase_shifted_coherent(th + 0.7, alpha);
  Vector d2 = (phase_shifted_coherent(th + 0.7 + h, alpha) - phase_shifted_coherent(th + 0.7 - h, alpha)) / (2 * h);
  d2 -= psi2.dot(d2) * psi2;
  const auto s2 = metrology::sld_pure(psi2, d2);
  CHECK(s2.l_plus == doctest::Approx(s.l_plus).epsilon(1e-9));
  CHECK(s2.l_plus == doctest::Approx(2.0 * d2.norm()));

  const auto z = metrology::sld_pure(psi, Vector::Zero(kLevels));
  CHECK(z.l_plus == 0.0);
  CHECK(z.l_minus == 0.0);
  CHECK_THROWS_AS(metrology::sld_pure(psi, cplx(0, 1) * psi), DomainError);
}

TEST_CASE("spin report") {
  CHECK(metrology::spin_variance(0.6) == doctest::Approx(0.64));
  CHECK(metrology::snr(0.0, 0.0) == 0.0);
  CHECK_THROWS_AS(metrology::snr(1.0, 0.0), DomainError);
  const auto r = metrology::spin_report(metrology::Parameter::force_difference, 0.6, 2.5e47,
                                        analytic::TaggedValue{4e47, false, ""}, 1.9e-24, 10);
  CHECK(r.variance == doctest::Approx(0.64));
  CHECK(r.snr == doctest::Approx(0.75));
  CHECK(r.cramer_rao_bound == doctest::Approx(1.0 / (10 * 2.5e47)));
  CHECK(r.quantum_cramer_rao_bound == doctest::Approx(1.0 / (10 * 4e47)));
  CHECK_FALSE(r.caveat.empty());
  const auto j = nlohmann::json::parse(metrology::to_json(r));
  CHECK(j["fisher_classical"]["unit"] == "1/N^2");
  CHECK(j["min_detectable"]["unit"] == "N");
  CHECK(j["snr"]["value"].get<double>() == doctest::Approx(0.75));

  const auto m = metrology::spin_report(metrology::Parameter::magnetic_gradient, 0.0, 0.0,
                                        analytic::TaggedValue{0.0, true, "critical"}, 4e-5);
  CHECK(m.snr == 0.0);
  CHECK(m.quantum_cramer_rao_bound == 0.0);
  CHECK(std::isinf(m.cramer_rao_bound));
  const auto k = nlohmann::json::parse(metrology::to_json(m));
  CHECK(k["fisher_quantum"]["diverges"] == true);
  CHECK(k["cramer_rao_bound"]["value"] == "inf");
  CHECK(k["min_detectable"]["unit"] == "T/m");
}

TEST_CASE("phonon report takes the variance from the state") {
  BasisDescriptor b(0, {kLevels});
  // coherent: variance equals the mean
  const CompositeState coh(b, phase_shifted_coherent(0.0, cplx(1.1, 0.0)));
  const auto r = metrology::phonon_report(metrology::Parameter::force_difference, coh, number_op(b, 0), "rock",
                                          analytic::TaggedValue{1.0, false, ""}, 0.0);
  CHECK(r.signal == doctest::Approx(1.21).epsilon(1e-12));
  CHECK(r.variance == doctest::Approx(1.21).epsilon(1e-12));
  CHECK(r.snr == doctest::Approx(1.1).epsilon(1e-12));
  // Fock state: zero variance, nonzero signal
  Vector f = Vector::Zero(kLevels);
  f(2) = 1.0;
  CHECK_THROWS_AS(metrology::phonon_report(metrology::Parameter::force_difference, CompositeState(b, f),
                                           number_op(b, 0), "rock", analytic::TaggedValue{}, 0.0),
                  DomainError);
}

}  // TEST_SUITE
