// gradsense: figure reproduction, sweeps, config validation and closed-form
// evaluation for the trapped-ion force and gradient sensing protocols.
//
// Exit codes: 0 success, 2 config error, 3 numerical failure, 4 threshold breach.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "gradsense/analytic.hpp"
#include "gradsense/cli/config.hpp"
#include "gradsense/cli/csv.hpp"
#include "gradsense/cli/scenarios.hpp"
#include "gradsense/cli/sweep.hpp"
#include "gradsense/diagnostics.hpp"
#include "gradsense/metrology.hpp"
#include "gradsense/protocols.hpp"
#include "gradsense/units.hpp"

using namespace gradsense;
using nlohmann::ordered_json;

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;
constexpr int kThresholdBreach = 4;

const std::vector<std::string> kFormulas = {"signal", "min_detectable", "fisher", "report", "kappa_star",
                                            "mean_phonon", "qfi_cho"};

cli::ScenarioSpec base_spec(const std::string& config, const std::string& figure, int nmax) {
  cli::ScenarioSpec spec;
  if (!config.empty()) {
    spec = cli::load_config(config);
  } else {
    spec = cli::load_config(cli::canned_config_path(figure));
  }
  const int env = cli::nmax_from_environment();
  if (nmax > 0) spec.probe.n_max = nmax;
  else if (env > 0) spec.probe.n_max = env;
  return spec;
}

double take_standalone(std::vector<std::string>& sets, const std::string& key, cli::Dimension dim, double fallback) {
  for (auto it = sets.begin(); it != sets.end(); ++it) {
    const auto eq = it->find('=');
    if (eq != std::string::npos && it->substr(0, eq) == key) {
      const double v = cli::parse_quantity(it->substr(eq + 1), dim);
      sets.erase(it);
      return v;
    }
  }
  return fallback;
}

ordered_json evaluate_formula(const std::string& formula, cli::ScenarioSpec spec, std::vector<std::string> sets) {
  ordered_json j;
  j["formula"] = formula;
  if (formula == "kappa_star") {
    const double zeta = take_standalone(sets, "zeta_sq", cli::Dimension::none, std::nan(""));
    for (const auto& s : sets) cli::apply_override(spec, s);
    const auto& p = spec.probe;
    const double z = std::isnan(zeta) ? 4.0 * p.g[0] * p.g[0] / (p.omega0 * p.delta) : zeta;
    const auto k = analytic::kappa_star_solve(p.delta, z, spec.k_c, spec.k_r);
    j["delta_krad_s"] = p.delta;
    j["zeta_sq"] = z;
    j["k_c"] = spec.k_c;
    j["k_r"] = spec.k_r;
    j["x"] = k.x;
    j["kappa_star_krad_s"] = k.kappa;
    j["residual"] = k.residual;
    j["t_star_ms"] = k.t_star;
    j["t_star_mismatch_ms"] = k.t_star_mismatch;
    return j;
  }
  const double t = take_standalone(sets, "t", cli::Dimension::time, std::nan(""));
  for (const auto& s : sets) cli::apply_override(spec, s);
  const auto& p = spec.probe;

  if (formula == "mean_phonon" || formula == "qfi_cho" ||
      (formula == "min_detectable" && spec.protocol == cli::Protocol::oscillator)) {
    if (!spec.force) throw cli::ConfigError("formula '" + formula + "' needs a force scenario");
    for (int mode = 0; mode < 2; ++mode) {
      const auto sd = analytic::squeeze_displace_params(p, *spec.force, mode);
      ordered_json m;
      m["omega_q_krad_s"] = sd.omega_q;
      m["zeta_sq"] = sd.zeta_sq;
      m["nu"] = sd.nu;
      m["abs_alpha"] = std::abs(sd.alpha);
      m["t_star_ms"] = sd.t_star;
      if (formula == "mean_phonon") {
        const double tt = std::isnan(t) ? (mode == 0 ? spec.k_c : spec.k_r) * sd.t_star : t;
        m["t_ms"] = tt;
        m["mean_phonons"] = analytic::mean_phonon_signal(sd, tt);
        m["constant_part"] = analytic::mean_phonon_constant(sd);
      } else if (formula == "qfi_cho") {
        for (auto [name, e] : {std::pair{"force_per_N2", analytic::Estimand::force},
                               std::pair{"phase_per_rad2", analytic::Estimand::phase}}) {
          const auto v = analytic::qfi_cho(sd, e, p.phi[0], spec.force->xi);
          if (v.diverges) m[std::string("qfi_") + name] = "inf";
          else m[std::string("qfi_") + name] = v.value;
        }
      } else {
        m["F_min_N"] = analytic::min_detectable_force_cho(sd.omega_q, sd.zeta_sq, p.x0);
        m["F_min_yN"] = m["F_min_N"].get<double>() / units::yocto_newton;
      }
      j[sd.mode] = m;
    }
    return j;
  }

  const double t_f = spec.t_final > 0.0 ? spec.t_final : protocols::default_final_time(p);
  if (formula == "signal") {
    if (spec.force) {
      const auto s = analytic::adiabatic_signal_force(p, *spec.force);
      j["sigma1z"] = s.sigma1z;
      j["p_up"] = s.p_up;
      j["tanh_argument"] = s.argument;
      j["asymmetry_krad_s"] = analytic::force_asymmetry(p, *spec.force);
    } else {
      j["sigma1z"] = analytic::adiabatic_signal_magnetic(p, *spec.magnetic, analytic::SpinOrder::antiferro);
      j["sigma1z_ferro"] = analytic::adiabatic_signal_magnetic(p, *spec.magnetic, analytic::SpinOrder::ferro);
    }
  } else if (formula == "min_detectable") {
    if (spec.force) {
      const double f = analytic::min_detectable_force_adiabatic(p);
      j["F_minus_min_N"] = f;
      j["F_minus_min_yN"] = f / units::yocto_newton;
    } else {
      const auto& b = *spec.magnetic;
      const double g = analytic::min_detectable_gradient(p.gamma, b.z_positions[1] - b.z_positions[0], b.lande_g);
      j["Bprime_min_T_per_m"] = g;
      j["Bprime_min_T_per_um"] = g / units::tesla_per_micrometre;
    }
  } else if (formula == "fisher" || formula == "report") {
    const auto point = cli::evaluate_point(spec);
    if (formula == "fisher") {
      j["t_final_ms"] = t_f;
      j["fisher_classical"] = point.fisher_classical;
      j["fisher_quantum"] = point.fisher_quantum;
      return j;
    }
    const auto param = spec.magnetic ? metrology::Parameter::magnetic_gradient
                       : spec.estimand == "phase" ? metrology::Parameter::force_phase
                                                  : metrology::Parameter::force_difference;
    const auto rep = metrology::spin_report(param, point.signal, point.fisher_classical,
                                            analytic::TaggedValue{point.fisher_quantum, false, ""},
                                            point.min_detectable, spec.n_experiments);
    return ordered_json::parse(metrology::to_json(rep));
  } else {
    throw cli::ConfigError("unknown formula '" + formula + "'");
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gradsense: trapped-ion force and gradient sensing simulator"};
  app.require_subcommand(1);

  std::string fig_name, out_dir = ".";
  int nmax = 0, jobs = 1, trunc_extra = -1;
  std::vector<std::string> sets;
  bool no_plot = false;
  auto* figure = app.add_subcommand("figure", "reproduce a figure from its canned config");
  figure->add_option("name", fig_name, "fig1 ... fig5")->required();
  figure->add_option("--out", out_dir, "output directory");
  figure->add_option("--nmax", nmax, "Fock truncation per mode (default: GRADSENSE_NMAX or config)");
  figure->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  figure->add_option("--set", sets, "override, e.g. probe.gamma=0.05krad_s");
  figure->add_option("--truncation-extra", trunc_extra, "extra Fock levels for the convergence check (0 skips)");
  figure->add_flag("--no-plot", no_plot, "skip the SVG rendering");

  std::string config, sweep_out;
  auto* sweep = app.add_subcommand("sweep", "parameter sweep defined by a config file");
  sweep->add_option("--config", config, "scenario file")->required();
  sweep->add_option("--out", sweep_out, "CSV path (default: stdout)");
  sweep->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--nmax", nmax, "Fock truncation per mode");
  sweep->add_option("--set", sets, "override");

  auto* validate = app.add_subcommand("validate", "check a config file and echo the interpreted values");
  validate->add_option("--config", config, "scenario file")->required();

  std::string formula, base_figure;
  auto* an = app.add_subcommand("analytic", "evaluate a closed-form expression");
  an->add_option("formula", formula, "signal, min_detectable, fisher, report, kappa_star, mean_phonon, qfi_cho")
      ->required()
      ->check(CLI::IsMember(kFormulas));
  an->add_option("--config", config, "scenario file supplying the parameters");
  an->add_option("--figure", base_figure, "canned figure supplying the parameters");
  an->add_option("--set", sets, "override, e.g. probe.gamma=0.05krad_s or t=10ms");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kConfigError;
  }

  try {
    if (*figure) {
      cli::FigureOptions opt;
      opt.out_dir = out_dir;
      opt.n_max = nmax;
      opt.jobs = jobs;
      opt.overrides = sets;
      opt.plot = !no_plot;
      opt.truncation_extra = trunc_extra;
      const auto rep = cli::run_figure(fig_name, opt);
      for (const auto& f : rep.files) std::cout << f << '\n';
      std::cout << "max deviation " << rep.max_deviation << " (threshold " << rep.threshold << ")";
      if (!std::isnan(rep.truncation_delta)) std::cout << ", truncation delta " << rep.truncation_delta;
      std::cout << '\n';
      return rep.within_threshold() ? 0 : kThresholdBreach;
    }
    if (*sweep) {
      auto spec = cli::load_config(config);
      const int env = cli::nmax_from_environment();
      if (nmax > 0) spec.probe.n_max = nmax;
      else if (env > 0) spec.probe.n_max = env;
      for (const auto& s : sets) cli::apply_override(spec, s);
      const auto table = cli::run_sweep(spec, jobs);
      if (sweep_out.empty()) table.write(std::cout);
      else table.write(sweep_out);
      return 0;
    }
    if (*validate) {
      std::cout << cli::echo(cli::load_config(config));
      return 0;
    }
    if (*an) {
      if (!config.empty() && !base_figure.empty()) throw cli::ConfigError("give either --config or --figure");
      std::string fig = base_figure;
      if (config.empty() && fig.empty()) {
        fig = (formula == "kappa_star" || formula == "mean_phonon" || formula == "qfi_cho") ? "fig4" : "fig1";
      }
      std::cout << evaluate_formula(formula, base_spec(config, fig, 0), sets).dump(2) << '\n';
      return 0;
    }
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
