#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "gradsense/diagnostics.hpp"
#include "gradsense/models.hpp"
#include "gradsense/units.hpp"

using namespace gradsense;
using namespace gradsense::hilbert;
using std::numbers::pi;

namespace {

double commutator_norm(const OperatorMatrix& a, const OperatorMatrix& b) {
  return (a * b - b * a).dense().cwiseAbs().maxCoeff();
}

models::ProbeParams three_ion(double kappa = 12.0) {
  auto p = models::ProbeParams::uniform(3, 2730.0, 0.13, 45.0, kappa, 5.0, 0.9 * pi, 14.5e-9, 3);
  p.g[1] = std::sqrt(2.0) * 5.0;
  return p;
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("bare hopping spectrum") {
  auto p = models::ProbeParams::uniform(2, 0.0, 0.1, 70.0, 12.0, 0.0, 0.0, 14.5e-9, 3);
  const auto h = models::build_rabi_lattice(p, 0.0);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h.dense());
  // single-phonon levels per spin configuration: 58 and 82
  int n58 = 0, n82 = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    if (std::abs(es.eigenvalues()(i) - 58.0) < 1e-10) ++n58;
    if (std::abs(es.eigenvalues()(i) - 82.0) < 1e-10) ++n82;
  }
  CHECK(n58 == 4);
  CHECK(n82 == 4);
}

TEST_CASE("rabi lattice at fig1 parameters") {
  auto p = models::ProbeParams::uniform(2, 825.0, 0.1, 70.0, 12.0, 12.5, 0.3, 14.5e-9, 4);
  const auto h = models::build_rabi_lattice(p, 0.0);
  CHECK(h.hermiticity_defect() == 0.0);
  // <up, vac| H |down, vac> on ion 1 is Omega/2
  const auto b = p.basis();
  const bool uu[] = {false, false}, du[] = {true, false};
  const int vac[] = {0, 0};
  CHECK(std::abs(h.dense()(b.index(uu, vac), b.index(du, vac)) - 412.5) < 1e-12);
  // drive gone at late times
  const auto late = models::build_rabi_lattice(p, 1e4);
  const auto bare = models::build_hopping(p, b) + models::build_spin_phonon(p);
  CHECK((late - bare).dense().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("parity symmetry of the unperturbed model") {
  for (int n : {2, 3}) {
    auto p = n == 2 ? models::ProbeParams::uniform(2, 825.0, 0.1, 70.0, 12.0, 12.5, 0.7, 14.5e-9, 5) : three_ion();
    const auto h = models::build_rabi_lattice(p, 3.0);
    const auto P = models::parity_symmetry(p.basis());
    CHECK(commutator_norm(h, P) <= 1e-10);
    models::ForceField f{std::vector<double>(n, 2e-24), 0.2};
    CHECK(commutator_norm(h + models::build_force_term(p, f), P) > 1e-3);
  }
}

TEST_CASE("force term") {
  auto p = models::ProbeParams::uniform(2, 825.0, 0.1, 70.0, 12.0, 12.5, 0.0, 14.5e-9, 4);
  CHECK(models::build_force_term(p, models::ForceField{{0.0, 0.0}, 0.3}).matrix().norm() == 0.0);
  CHECK(units::force_drive_rate(3.78e-24, 14.5e-9) == doctest::Approx(0.2598685035786425).epsilon(1e-13));
  const auto b = p.basis();
  const auto h = models::build_force_term(p, models::ForceField{{3.78e-24, 0.0}, 0.0});
  const double eps = 0.2598685035786425;
  const auto x1 = annihilation_op(b, 0) + creation_op(b, 0);
  CHECK((h.dense() - eps * x1.dense()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(h.hermiticity_defect() < 1e-15);
  CHECK_THROWS_AS(models::build_force_term(p, models::ForceField{{1e-24, 1e-24, 1e-24}, 0.0}), std::invalid_argument);
  const auto rates = models::ForceField::from_drive_rates({0.26, -0.1}, 0.0, 14.5e-9).drive_rates(14.5e-9);
  CHECK(rates[0] == doctest::Approx(0.26));
  CHECK(rates[1] == doctest::Approx(-0.1));
}

TEST_CASE("magnetic term") {
  auto p = models::ProbeParams::uniform(2, 925.0, 0.1, 50.0, 11.0, 25.0, 0.0, 14.5e-9, 3);
  models::MagneticField none{0.0, 0.0, {0.0, 4e-6}, 2.0};
  CHECK(models::build_magnetic_term(none, p.basis()).matrix().norm() == 0.0);
  CHECK(none.lambda() == doctest::Approx(175882001183.80368).epsilon(1e-13));
  models::MagneticField b{0.0, 4e-5, {0.0, 4e-6}, 2.0};
  auto d = b.detunings();
  CHECK((d[1] - d[0]) * 1e3 == doctest::Approx(28.141120189408593).epsilon(1e-12));
  b.b0 = 3e-6;
  auto e = b.detunings();
  CHECK((e[1] - e[0]) == doctest::Approx(d[1] - d[0]).epsilon(1e-9));
  const auto h = models::build_magnetic_term(b, p.basis());
  const auto expect = e[0] * pauli_op(p.basis(), 0, Axis::z) + e[1] * pauli_op(p.basis(), 1, Axis::z);
  CHECK((h - expect).dense().cwiseAbs().maxCoeff() < 1e-15);
  models::MagneticField bad{0.0, 1.0, {0.0}, 2.0};
  CHECK_THROWS_AS(models::build_magnetic_term(bad, p.basis()), std::invalid_argument);
}

TEST_CASE("collective modes") {
  auto p = models::ProbeParams::uniform(2, 825.0, 0.1, 70.0, 12.0, 12.5, 0.0, 14.5e-9, 3);
  auto m = models::collective_transform(p);
  CHECK(m.omega_c() == 82.0);
  CHECK(m.omega_r() == 58.0);
  CHECK(m.j_coupling == doctest::Approx(12.5 * 12.5 * (1.0 / 58.0 - 1.0 / 82.0)).epsilon(1e-14));

  auto q = three_ion(12.0);
  auto m3 = models::collective_transform(q);
  CHECK(m3.omega_c() == doctest::Approx(61.970562748477136));
  CHECK(m3.omega_r() == doctest::Approx(28.029437251522864));
  CHECK(m3.frequencies[2] == 45.0);

  auto flat = p;
  flat.kappa = 0.0;
  auto m0 = models::collective_transform(flat);
  CHECK(m0.omega_c() == m0.omega_r());
  CHECK(m0.j_coupling == 0.0);
}

TEST_CASE("collective frequencies diagonalize the hopping matrix") {
  for (int n : {2, 3}) {
    for (double kappa : {0.5, 7.0, 12.0}) {
      auto p = n == 2 ? models::ProbeParams::uniform(2, 1.0, 0.1, 45.0, kappa, 1.0, 0.0, 1e-8, 2) : three_ion(kappa);
      Eigen::MatrixXd k = Eigen::MatrixXd::Identity(n, n) * p.delta;
      for (int j = 0; j + 1 < n; ++j) k(j, j + 1) = k(j + 1, j) = kappa;
      const auto m = models::collective_transform(p);
      // V^T K V = diag(omega)
      const Eigen::MatrixXd d = m.vectors.transpose() * k * m.vectors;
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          const double want = a == b ? m.frequencies[a] : 0.0;
          CHECK(std::abs(d(a, b) - want) <= 1e-12 * p.delta);
        }
      }
      CHECK((m.vectors.transpose() * m.vectors - Eigen::MatrixXd::Identity(n, n)).norm() < 1e-14);
    }
  }
}

TEST_CASE("three-ion couplings are positive") {
  for (double kappa : {0.5, 5.0, 12.0, 25.0}) {
    const auto m = models::collective_transform(three_ion(kappa));
    CHECK(m.j_coupling > 0.0);
    REQUIRE(m.j_prime.has_value());
    CHECK(*m.j_prime > 0.0);
    const double g = 5.0;
    CHECK(*m.j_prime == doctest::Approx(g * g * (0.5 / m.omega_r() + 0.5 / m.omega_c() - 1.0 / 45.0)).epsilon(1e-13));
  }
}

TEST_CASE("hopping from trap geometry") {
  models::TrapGeometry t{40 * units::atomic_mass_unit, units::elementary_charge, 2 * pi * 3e6, 5e-6};
  const double k = models::hopping_from_trap(t);
  CHECK(k == doctest::Approx(737.07549541598562).epsilon(1e-12));
  auto half = t;
  half.dz /= 2;
  CHECK(models::hopping_from_trap(half) == doctest::Approx(8 * k).epsilon(1e-13));
  auto far = t;
  far.dz = 1.0;
  CHECK(models::hopping_from_trap(far) < 1e-13);
  // CGS evaluation of the bare formula describes the same coupling
  CHECK(models::hopping_from_trap(t, models::CoulombConvention::gaussian) == doctest::Approx(k).epsilon(1e-6));
  t.dz = -1.0;
  CHECK_THROWS_AS(models::hopping_from_trap(t), DomainError);
}

TEST_CASE("effective bosonic model") {
  auto p = models::ProbeParams::uniform(2, 300.0, 0.0, 0.6, 0.28, 2.5, pi / 3.0, 14.5e-9, 6);
  CHECK(4 * 2.5 * 2.5 / (300.0 * 0.6) == doctest::Approx(0.1389).epsilon(1e-3));
  const auto z = models::collective_zeta_sq(p);
  CHECK(z[0] == doctest::Approx(25.0 / (300.0 * 0.88)));
  CHECK(z[1] == doctest::Approx(25.0 / (300.0 * 0.32)));
  models::ForceField f{{7e-24, 5e-24}, pi / 2.0};
  const auto h = models::build_effective_bosonic(p, f);
  CHECK(h.hermiticity_defect() < 1e-14);
  CHECK(h.basis().num_spins() == 0);

  auto free = p;
  free.g = {0.0, 0.0};
  const auto h0 = models::build_effective_bosonic(free, f);
  const auto b = h0.basis();
  const auto expect = models::build_hopping(free, b) + models::build_force_term(b, f, p.x0);
  CHECK((h0 - expect).dense().cwiseAbs().maxCoeff() < 1e-14);

  auto crit = p;
  crit.g = {5.0, 5.0};
  CHECK_THROWS_AS(models::build_effective_bosonic(crit, f), DomainError);
}

TEST_CASE("probe validation") {
  auto p = models::ProbeParams::uniform(2, 1.0, 0.1, 10.0, 12.0, 1.0, 0.0, 1e-8, 3);
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.kappa = 1.0;
  CHECK_NOTHROW(p.validate());
  p.g = {1.0};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

}  // TEST_SUITE
