// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Figure outputs land in ./acceptance_out (relative to the working directory).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gradsense/analytic.hpp"
#include "gradsense/cli/config.hpp"
#include "gradsense/cli/scenarios.hpp"
#include "gradsense/diagnostics.hpp"
#include "gradsense/dynamics.hpp"
#include "gradsense/metrology.hpp"
#include "gradsense/protocols.hpp"
#include "gradsense/special_functions.hpp"
#include "gradsense/units.hpp"

using namespace gradsense;
using analytic::cplx;
using std::numbers::pi;
using Clock = std::chrono::steady_clock;

namespace {

std::string out_dir;
std::map<std::string, cli::FigureReport> reports;

// a sub-check: prints its own line and feeds the criterion verdict
struct Checks {
  bool ok = true;
  void operator()(bool pass, const std::string& what) {
    ok = ok && pass;
    std::cout << "    [" << (pass ? "ok" : "FAIL") << "] " << what << '\n' << std::flush;
  }
};

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

const cli::FigureReport& figure(const std::string& name) {
  auto it = reports.find(name);
  if (it != reports.end()) return it->second;
  cli::FigureOptions opt;
  opt.out_dir = out_dir;
  opt.plot = false;
  const auto t0 = Clock::now();
  auto rep = cli::run_figure(name, opt);
  std::cout << "    (" << name << " ran in " << fmt(std::chrono::duration<double>(Clock::now() - t0).count(), 4)
            << " s)\n";
  return reports.emplace(name, std::move(rep)).first->second;
}

// one numeric column of a CSV written by run_figure
std::vector<double> csv_column(const std::string& file, const std::string& column) {
  std::ifstream in(std::filesystem::path(out_dir) / file);
  if (!in) throw std::runtime_error("cannot open " + file);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  const auto pos = std::find(header.begin(), header.end(), column);
  if (pos == header.end()) throw std::runtime_error(file + " has no column " + column);
  const auto idx = static_cast<std::size_t>(pos - header.begin());
  std::vector<double> values;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    for (std::size_t k = 0; k <= idx && std::getline(ss, cell, ','); ++k) {
    }
    values.push_back(std::stod(cell));
  }
  return values;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

hilbert::Vector two_state_final(double p, double x, double gamma, double t_f) {
  const auto r = dynamics::demkov_integrate(2 * gamma * p, 2 * gamma * x, gamma, t_f, {M_SQRT1_2, M_SQRT1_2}, 1, 1e-12);
  hilbert::Vector v(2);
  v << r.c_plus.back(), r.c_minus.back();
  return v;
}

cli::ScenarioSpec canned(const std::string& name) {
  cli::FigureOptions opt;
  return cli::figure_spec(name, opt);
}

// ---------------------------------------------------------------------------

bool criterion1(Checks& c) {
  const auto& r = figure("fig1");
  c(r.within_threshold(), "fig1 max |sigma1 numeric - closed form| = " + fmt(r.max_deviation) + " (<= 0.05, 16 phases x 2 force pairs)");
  const auto f1 = csv_column("fig1_numeric.csv", "F1_yN");
  std::vector<double> series = f1;
  std::sort(series.begin(), series.end());
  series.erase(std::unique(series.begin(), series.end()), series.end());
  c(series.size() == 2 && f1.size() == 32, "grid has " + std::to_string(f1.size()) + " points over " +
                                               std::to_string(series.size()) + " force pairs");
  c(r.runtime_s <= 600.0, "runtime " + fmt(r.runtime_s, 4) + " s (<= 600 s)");
  return c.ok;
}

bool criterion2(Checks& c) {
  const auto t0 = Clock::now();
  const auto& r = figure("fig2");
  const auto gammas = csv_column("fig2_numeric.csv", "gamma_krad_s");
  c(r.within_threshold(), "fig2 max deviation = " + fmt(r.max_deviation) + " over " + std::to_string(gammas.size()) +
                              " points (<= 0.05)");

  auto spec = canned("fig2");
  bool exact = true;
  for (double gamma : {0.05, 0.1, 0.3}) {
    spec.probe.gamma = gamma;
    auto b = *spec.magnetic;
    const double ref = analytic::adiabatic_signal_magnetic(spec.probe, b, analytic::SpinOrder::antiferro);
    for (double b0 : {1e-9, 1e-6, 1e-3, -2e-4}) {
      b.b0 = b0;
      exact = exact && analytic::adiabatic_signal_magnetic(spec.probe, b, analytic::SpinOrder::antiferro) == ref;
    }
  }
  c(exact, "closed form bit-identical under B0 in {1e-9, 1e-6, 1e-3, -2e-4} T");

  // the canned cutoff overflows once the offset polarizes the spins
  spec = canned("fig2");
  spec.probe.n_max = 16;
  protocols::AdiabaticOptions o;
  o.tolerance = spec.tolerance;
  o.record_points = 20;
  auto shifted = *spec.magnetic;
  shifted.b0 += 1e-6;
  const auto base = protocols::adiabatic_protocol_run(spec.probe, *spec.magnetic, o);
  const auto moved = protocols::adiabatic_protocol_run(spec.probe, shifted, o);
  const double sens = std::abs(moved.sigma_z[0] - base.sigma_z[0]);
  c(sens <= 0.02, "simulated sigma1 " + fmt(base.sigma_z[0], 4) + " -> " + fmt(moved.sigma_z[0], 4) +
                      " under B0 + 1e-6 T at n_max 16, change " + fmt(sens, 4) + " (<= 0.02)");
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  c(secs <= 900.0, "runtime " + fmt(secs, 4) + " s (<= 900 s)");
  return c.ok;
}

bool criterion3(Checks& c) {
  const double bmin = analytic::min_detectable_gradient(0.05, 4e-6, 2.0) / units::tesla_per_micrometre;
  c(std::abs(bmin / 4.0e-11 - 1.0) <= 0.03, "B'_min at gamma 0.05 krad/s = " + fmt(bmin) + " T/um (4.0e-11 within 3%)");
  const double from_report = figure("fig2").metric("Bprime_min_T_per_um_at_gamma_0.05");
  c(from_report == bmin, "fig2 report agrees: " + fmt(from_report));

  const auto spec = canned("fig5");
  const auto sd = analytic::squeeze_displace_params(spec.probe, *spec.force, 1);
  const double fmin = analytic::min_detectable_force_cho(sd.omega_q, sd.zeta_sq, spec.probe.x0) / units::yocto_newton;
  c(fmin >= 2.4 && fmin <= 2.5, "rock-mode F_min = " + fmt(fmin) + " yN (2.4 to 2.5)");
  const auto& r5 = figure("fig5");
  c(std::abs(r5.metric("F_rock_min_yN") - fmin) <= 1e-12, "fig5 report agrees: " + fmt(r5.metric("F_rock_min_yN")));
  std::cout << "    (info) fig5 SNR at t* vs 2|alpha|: max relative deviation " << fmt(r5.max_deviation) << ", "
            << (r5.within_threshold() ? "within" : "outside") << " 0.05\n";
  return c.ok;
}

bool criterion4(Checks& c) {
  std::mt19937_64 rng(20261019);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double gamma = 0.1;
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double x = std::pow(10.0, 3.0 + unit(rng));
    const double p = -1.0 + 2.0 * unit(rng);
    const auto v = two_state_final(p, x, gamma, 8.0 / gamma);
    worst = std::max(worst, std::abs(std::norm(v(0)) - (0.5 + 0.5 * std::tanh(pi * p))));
  }
  c(worst <= 1e-3, "|c+(8/gamma)|^2 vs 1/2 + tanh/2, 20 random points with x in [1e3, 1e4]: worst " + fmt(worst) +
                       " (<= 1e-3)");

  double worst_b = 0.0;
  for (int k = 0; k < 10; ++k) {
    const double x = 0.5 + 19.5 * unit(rng);
    const double p = -1.0 + 2.0 * unit(rng);
    const double t = (1.0 + 4.0 * unit(rng)) / gamma;
    analytic::DemkovClosedForm d{2 * gamma * p, gamma, x};
    const auto [cp, cm] = analytic::demkov_closed_amplitudes(d, t, analytic::DemkovForm::bessel);
    const auto v = two_state_final(p, x, gamma, t);
    worst_b = std::max({worst_b, std::abs(cp - v(0)), std::abs(cm - v(1))});
  }
  c(worst_b <= 1e-6, "Bessel form vs ODE amplitudes, 10 points with x <= 20: worst " + fmt(worst_b) + " (<= 1e-6)");
  return c.ok;
}

bool criterion5(Checks& c) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double gamma = 0.1;
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    // the closed form drops O(1/x) terms (about 1% at x = 2e3 when |p| ~ 1) and O(z) terms;
    // gamma t_f >= 9 keeps z = (x/2) e^{-2 gamma t_f} below 3e-4
    const double x = 5e3 * std::pow(6.0, unit(rng));
    const double p = -1.0 + 2.0 * unit(rng);
    const double tf = (9.0 + unit(rng)) / gamma;
    const double num = metrology::qfi_numeric([&](double pp) { return two_state_final(pp, x, gamma, tf); }, p, 1e-4).value;
    const double closed = analytic::qfi_demkov_p({2 * gamma * p, gamma, x}, tf);
    worst = std::max(worst, std::abs(num / closed - 1.0));
  }
  c(worst <= 0.01, "closed-form QFI vs numeric two-state QFI, 10 points with x in [5e3, 3e4]: worst relative " + fmt(worst) + " (<= 1%)");

  // the force QFI is the chain rule on the two-state one
  const auto spec = canned("fig1");
  auto probe = spec.probe;
  probe.phi = {0.3, 0.3};
  const models::ForceField f{{3.78e-24, 0.95e-24}, 0.98 * pi};
  const double tf = protocols::default_final_time(probe);
  const double h = 1e-27;
  const models::ForceField up{{f.force[0] + h / 2, f.force[1] - h / 2}, f.xi};
  const models::ForceField down{{f.force[0] - h / 2, f.force[1] + h / 2}, f.xi};
  const double dpdf =
      (analytic::demkov_parameters(probe, up).p() - analytic::demkov_parameters(probe, down).p()) / (2 * h);
  const double chain = analytic::qfi_demkov_p(analytic::demkov_parameters(probe, f), tf) * dpdf * dpdf;
  const double direct = analytic::qfi_adiabatic(probe, f, tf, analytic::Estimand::force);
  c(std::abs(direct / chain - 1.0) <= 1e-6,
    "force QFI " + fmt(direct) + " /N^2 equals two-state QFI x (dp/dF)^2 (rel " + fmt(std::abs(direct / chain - 1.0), 3) + ")");

  // t_f^2 growth; x = 2 exp(Re Psi(beta)) cancels the constant in the log
  const double p = 0.3;
  const double x = 2.0 * std::exp(special::complex_digamma({0.5, p}).real());
  std::vector<double> lt, li, lc;
  for (double gt = 4.0; gt <= 10.0 + 1e-9; gt += 1.0) {
    const double tf2 = gt / gamma;
    lt.push_back(std::log(tf2));
    li.push_back(std::log(metrology::qfi_numeric([&](double pp) { return two_state_final(pp, x, gamma, tf2); }, p, 1e-4).value));
    lc.push_back(std::log(analytic::qfi_demkov_p({2 * gamma * p, gamma, x}, tf2)));
  }
  auto slope = [&](const std::vector<double>& y) {
    const double n = static_cast<double>(lt.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < lt.size(); ++k) {
      sx += lt[k];
      sy += y[k];
      sxx += lt[k] * lt[k];
      sxy += lt[k] * y[k];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  const double sn = slope(li), sc = slope(lc);
  c(std::abs(sn - 2.0) <= 0.05, "log-log slope of numeric QFI over gamma t_f in [4, 10]: " + fmt(sn, 4) +
                                    " (closed form " + fmt(sc, 4) + ", 2 +- 0.05)");
  return c.ok;
}

bool criterion6(Checks& c) {
  const auto& r = figure("fig3");
  const double s1 = r.metric("sigma1z_final"), s3 = r.metric("sigma3z_final");
  c(r.within_threshold(), "sigma1(t_f) = " + fmt(s1, 4) + " vs closed form " + fmt(r.metric("sigma1z_closed_form"), 4) +
                              ", deviation " + fmt(r.max_deviation) + " (<= 0.05)");
  c(r.metric("p_ddd_final") <= 0.03, "p_ddd(t_f) = " + fmt(r.metric("p_ddd_final")) + " (<= 0.03)");
  c(r.metric("p_ddu_final") <= 0.03, "p_ddu(t_f) = " + fmt(r.metric("p_ddu_final")) + " (<= 0.03)");
  c(std::abs(s3 - s1) <= 0.05, "|sigma3 - sigma1| = " + fmt(std::abs(s3 - s1)) + " (<= 0.05)");
  return c.ok;
}

bool criterion7(Checks& c) {
  const auto& r = figure("fig4");
  const auto t = csv_column("fig4_numeric.csv", "t_ms");
  c(r.within_threshold() && t.size() >= 200, "effective bosonic vs closed form on " + std::to_string(t.size()) +
                                                 " times: max " + fmt(r.max_deviation) + " (<= 1e-6)");
  const double full = r.metric("full_model_relative_deviation_at_maxima");
  c(full <= 0.05, "full model vs closed form at the maxima: relative " + fmt(full) + " (<= 5%)");

  const auto spec = canned("fig4");
  double n0 = 0.0;
  for (int mode = 0; mode < 2; ++mode) {
    n0 = std::max(n0, std::abs(analytic::mean_phonon_signal(analytic::squeeze_displace_params(spec.probe, *spec.force, mode), 0.0)));
  }
  c(n0 <= 1e-12, "<n>(0) = " + fmt(n0) + " (<= 1e-12)");
  const double dc = std::abs(r.metric("n_com_at_t_star") - r.metric("four_alpha_sq_com"));
  const double dr = std::abs(r.metric("n_rock_at_t_star") - r.metric("four_alpha_sq_rock"));
  c(std::max(dc, dr) <= 1e-10, "<n_q>(t*) - 4|alpha_q|^2: com " + fmt(dc, 3) + ", rock " + fmt(dr, 3) + " (<= 1e-10)");
  return c.ok;
}

bool criterion8(Checks& c) {
  const auto k = analytic::kappa_star_solve(0.6, 0.1389, 3, 1);
  c(std::abs(k.kappa - 0.277) <= 0.005, "kappa* = " + fmt(k.kappa) + " krad/s (0.277 +- 0.005)");
  c(std::abs(k.residual) <= 1e-12, "residual " + fmt(k.residual, 3) + " (<= 1e-12)");
  return c.ok;
}

bool criterion9(Checks& c) {
  const auto spec = canned("fig4");
  const double xi = spec.force->xi;
  double worst = 0.0;
  bool argmax_ok = true;
  std::string where;
  for (int mode = 0; mode < 2; ++mode) {
    const auto sd = analytic::squeeze_displace_params(spec.probe, *spec.force, mode);
    const double fmin = analytic::min_detectable_force_cho(sd.omega_q, sd.zeta_sq, spec.probe.x0);
    for (double x : {0.0, 0.4, xi, 2.0, 5.1}) {
      const double q = analytic::qfi_cho(sd, analytic::Estimand::force, x, x).value;
      worst = std::max(worst, std::abs(q * fmin * fmin / 4.0 - 1.0));
    }
    int best = 0;
    std::vector<double> vals;
    for (int k = 0; k < 32; ++k) vals.push_back(analytic::qfi_cho(sd, analytic::Estimand::phase, xi + 2 * pi * k / 32, xi).value);
    for (int k = 1; k < 32; ++k)
      if (vals[k] > vals[best]) best = k;
    const double peak = 2.0 * std::pow(spec.probe.x0 * sd.force /
                                           (units::hbar * units::to_rad_per_s(sd.omega_q) * (1.0 - sd.zeta_sq)), 2);
    const bool at_half_pi = std::abs(vals[8] - vals[best]) <= 1e-12 * vals[best];
    argmax_ok = argmax_ok && at_half_pi && std::abs(vals[8] / peak - 1.0) <= 1e-12;
    where += std::string(mode == 0 ? "com" : " rock") + " k=" + std::to_string(best);
  }
  c(worst <= 1e-12, "I_Q(F) (F_min)^2 / 4 - 1 at phi = xi: worst " + fmt(worst, 3) + " (<= 1e-12)");
  c(argmax_ok, "I_Q(xi) maximal at phi = xi + pi/2 (k = 8 of 32, " + where + ") with value 2[x0 F/hbar w (1 - zeta^2)]^2");

  analytic::SqueezeDisplaceParams sd = analytic::squeeze_displace_params(spec.probe, *spec.force, 1);
  auto flagged = [&](double z) {
    sd.zeta_sq = z;
    return analytic::qfi_cho(sd, analytic::Estimand::force, 0.0, xi).diverges &&
           analytic::qfi_cho(sd, analytic::Estimand::phase, 0.0, xi).diverges;
  };
  c(flagged(1.0 - 1e-9) && flagged(1.0 - 1e-12) && !flagged(1.0 - 1e-8),
    "divergence flagged at zeta^2 = 1 - 1e-9 and 1 - 1e-12, not at 1 - 1e-8");
  return c.ok;
}

bool criterion10(Checks& c, Clock::time_point started) {
  // unitarity
  double drift = std::max({max_abs(csv_column("fig1_numeric.csv", "norm_drift")),
                           max_abs(csv_column("fig2_numeric.csv", "norm_drift")), figure("fig3").metric("norm_drift"),
                           figure("fig4").metric("norm_drift")});

  // parity null signals at the fig1 and fig2 settings
  auto s1 = canned("fig1");
  protocols::AdiabaticOptions o;
  o.tolerance = s1.tolerance;
  o.record_points = 40;
  const auto force_null = protocols::adiabatic_protocol_run(s1.probe, models::ForceField{{0.0, 0.0}, s1.force->xi}, o);
  auto s2 = canned("fig2");
  auto bnull = *s2.magnetic;
  bnull.b0 = 0.0;
  bnull.b_prime = 0.0;
  const auto field_null = protocols::adiabatic_protocol_run(s2.probe, bnull, o);
  double null = 0.0;
  for (const auto* r : {&force_null, &field_null}) {
    null = std::max(null, r->trajectory.values.cwiseAbs().maxCoeff());
    drift = std::max(drift, r->trajectory.norm_drift);
  }
  c(drift <= 1e-9, "norm drift over fig1-4 runs and null runs: " + fmt(drift, 3) + " (<= 1e-9)");
  c(null <= 1e-6, "null signal with F = 0 and B = 0: max |sigma_z| over time " + fmt(null, 3) + " (<= 1e-6)");

  // antiferro anticorrelation
  const auto a = csv_column("fig1_numeric.csv", "sigma1z");
  const auto b = csv_column("fig1_numeric.csv", "sigma2z");
  double anti = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) anti = std::max(anti, std::abs(a[k] + b[k]));
  c(anti <= 0.05, "|sigma1 + sigma2| over fig1 runs: " + fmt(anti) + " (<= 0.05)");

  // Fisher hierarchy, closed forms and numeric two-state
  bool hier = true;
  auto probe = s1.probe;
  const double tf = protocols::default_final_time(probe);
  for (double phi : {0.0, 0.7, 1.9, 3.3, 5.0}) {
    probe.phi = {phi, phi};
    for (double f1 : {1.2e-24, 2.84e-24, 3.78e-24, 6e-24}) {
      const models::ForceField f{{f1, 0.95e-24}, 0.98 * pi};
      for (auto e : {analytic::Estimand::force, analytic::Estimand::phase}) {
        hier = hier && analytic::classical_fisher(probe, f, e) <= analytic::qfi_adiabatic(probe, f, tf, e) * (1 + 1e-12);
      }
    }
  }
  const double gamma = 0.1;
  for (double p : {-0.6, 0.1, 0.45}) {
    const double x = 2e3, t = 80.0, h = 1e-4;
    auto pop = [&](double pp) { return std::norm(two_state_final(pp, x, gamma, t)(0)); };
    const double d = (pop(p + h) - pop(p - h)) / (2 * h), pp = pop(p);
    const double icl = d * d / (pp * (1 - pp));
    const double iq = metrology::qfi_numeric([&](double q) { return two_state_final(q, x, gamma, t); }, p, h).value;
    hier = hier && icl <= iq * (1 + 1e-6);
  }
  c(hier, "I_cl <= I_Q on a 5 x 4 closed-form grid and 3 numeric two-state points");

  // Gamma and digamma identities
  double gid = 0.0;
  for (cplx z : {cplx(0.5, 0.3), cplx(0.5, -1.7), cplx(1.3, 2.2), cplx(0.25, 0.0), cplx(3.7, -0.4)}) {
    const cplx g = special::complex_gamma(z);
    gid = std::max(gid, std::abs(special::complex_gamma(z + 1.0) / (z * g) - 1.0));
    gid = std::max(gid, std::abs(special::complex_digamma(z + 1.0) - special::complex_digamma(z) - 1.0 / z) /
                            std::abs(special::complex_digamma(z + 1.0)));
    gid = std::max(gid, std::abs(g * special::complex_gamma(1.0 - z) * std::sin(pi * z) / pi - 1.0));
  }
  for (double y : {0.1, 0.3, 1.0, 2.5}) {
    gid = std::max(gid, std::abs(std::norm(special::complex_gamma({0.5, y})) * std::cosh(pi * y) / pi - 1.0));
  }
  c(gid <= 1e-12, "Gamma recurrence, reflection, |Gamma(1/2 + iy)|^2 and digamma recurrence: worst " + fmt(gid, 3) +
                      " (<= 1e-12)");

  const double t1 = figure("fig1").truncation_delta, t2 = figure("fig2").truncation_delta;
  c(t1 <= 1e-3 && t2 <= 1e-3, "n_max + 4 change: fig1 " + fmt(t1, 3) + ", fig2 " + fmt(t2, 3) + " (<= 1e-3)");

  const double total = std::chrono::duration<double>(Clock::now() - started).count();
  c(total <= 2700.0, "total acceptance runtime " + fmt(total, 4) + " s (<= 2700 s)");
  return c.ok;
}

}  // namespace

int main() {
  const auto started = Clock::now();
  out_dir = (std::filesystem::current_path() / "acceptance_out").string();
  std::filesystem::create_directories(out_dir);

  const std::vector<std::pair<std::string, std::function<bool(Checks&)>>> criteria = {
      {"adiabatic force signal vs simulation (fig1)", criterion1},
      {"magnetic gradient signal and B0 independence (fig2)", criterion2},
      {"minimal detectable gradient and force", criterion3},
      {"two-state model: ODE vs asymptotic and Bessel forms", criterion4},
      {"adiabatic QFI vs numeric, t_f^2 growth", criterion5},
      {"three-ion signal and collective probabilities (fig3)", criterion6},
      {"mean phonon signal (fig4)", criterion7},
      {"kappa* root", criterion8},
      {"strong-coupling QFI", criterion9},
      {"property suites", [&](Checks& c) { return criterion10(c, started); }},
  };

  // e.g. ACCEPTANCE_ONLY=5,9 for a partial rerun
  std::vector<bool> enabled(criteria.size(), true);
  if (const char* only = std::getenv("ACCEPTANCE_ONLY")) {
    enabled.assign(criteria.size(), false);
    std::stringstream ss(only);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto k = static_cast<std::size_t>(std::stoul(item));
      if (k >= 1 && k <= criteria.size()) enabled[k - 1] = true;
    }
  }

  int failed = 0;
  std::vector<std::string> summary;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& [title, run] = criteria[i];
    if (!enabled[i]) continue;
    std::cout << "criterion " << i + 1 << ": " << title << '\n' << std::flush;
    Checks c;
    std::string error;
    try {
      run(c);
    } catch (const std::exception& e) {
      c.ok = false;
      error = e.what();
      std::cout << "    [FAIL] exception: " << error << '\n';
    }
    failed += c.ok ? 0 : 1;
    summary.push_back("criterion " + std::to_string(i + 1) + ": " + (c.ok ? "PASS" : "FAIL") + "  " + title);
    std::cout << summary.back() << "\n\n" << std::flush;
  }
  std::cout << "summary\n";
  for (const auto& s : summary) std::cout << s << '\n';
  std::cout << failed << " of " << summary.size() << " criteria failed\n";
  return failed == 0 ? 0 : 1;
}
