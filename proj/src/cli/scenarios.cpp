#include "gradsense/cli/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "gradsense/analytic.hpp"
#include "gradsense/cli/csv.hpp"
#include "gradsense/cli/plot.hpp"
#include "gradsense/cli/sweep.hpp"
#include "gradsense/diagnostics.hpp"
#include "gradsense/protocols.hpp"
#include "gradsense/units.hpp"

#ifndef GRADSENSE_SOURCE_CONFIG_DIR
#define GRADSENSE_SOURCE_CONFIG_DIR "configs/paper"
#endif

namespace gradsense::cli {

namespace fs = std::filesystem;

double FigureReport::metric(const std::string& key) const {
  for (const auto& [k, v] : metrics) {
    if (k == key) return v;
  }
  throw std::out_of_range("report has no metric '" + key + "'");
}

std::vector<std::string> figure_names() { return {"fig1", "fig2", "fig3", "fig4", "fig5"}; }

std::string canned_config_path(const std::string& name, const std::string& config_dir) {
  const auto names = figure_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw ConfigError("unknown figure '" + name + "' (expected fig1 ... fig5)");
  }
  std::string dir = config_dir;
  if (dir.empty()) {
    const char* env = std::getenv("GRADSENSE_CONFIG_DIR");
    dir = env && *env ? env : GRADSENSE_SOURCE_CONFIG_DIR;
  }
  return (fs::path(dir) / (name + ".cfg")).string();
}

int nmax_from_environment() {
  const char* env = std::getenv("GRADSENSE_NMAX");
  if (!env || !*env) return 0;
  try {
    const int n = static_cast<int>(parse_quantity(env, Dimension::integer));
    if (n < 2) throw ConfigError("must be >= 2");
    return n;
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("GRADSENSE_NMAX: ") + e.what());
  }
}

ScenarioSpec figure_spec(const std::string& name, const FigureOptions& options) {
  ScenarioSpec spec = load_config(canned_config_path(name, options.config_dir));
  const int env = nmax_from_environment();
  if (options.n_max > 0) spec.probe.n_max = options.n_max;
  else if (env > 0) spec.probe.n_max = env;
  for (const auto& o : options.overrides) apply_override(spec, o);
  spec.validate();
  return spec;
}

namespace {

using nlohmann::ordered_json;

struct Output {
  const FigureOptions& opt;
  FigureReport& report;

  std::string path(const std::string& suffix) const {
    return (fs::path(opt.out_dir) / (report.name + suffix)).string();
  }
  void csv(const std::string& suffix, const CsvTable& t) {
    t.write(path(suffix));
    report.files.push_back(path(suffix));
  }
  void svg(const PlotSpec& p) {
    if (!opt.plot) return;
    write_svg(path(".svg"), p);
    report.files.push_back(path(".svg"));
  }
};

std::string point_label(const std::vector<std::pair<std::string, double>>& coords) {
  std::ostringstream os;
  os.precision(6);
  for (std::size_t i = 0; i < coords.size(); ++i) os << (i ? ", " : "") << coords[i].first << " = " << coords[i].second;
  return os.str();
}

// rethrow simulation failures with the parameter point attached
template <class F>
auto at_point(const std::vector<std::pair<std::string, double>>& coords, F&& fn) {
  try {
    return fn();
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(e.what()) + " [at " + point_label(coords) + "]");
  } catch (const DomainError& e) {
    throw DomainError(std::string(e.what()) + " [at " + point_label(coords) + "]");
  }
}

protocols::AdiabaticOptions adiabatic_options(const ScenarioSpec& spec, int record_points) {
  protocols::AdiabaticOptions o;
  o.t_final = spec.t_final;
  o.tolerance = spec.tolerance;
  o.record_points = record_points;
  return o;
}

int truncation_extra(const FigureOptions& opt, int fallback) {
  return opt.truncation_extra >= 0 ? opt.truncation_extra : fallback;
}

double adiabatic_delta(const protocols::AdiabaticResult& a, const protocols::AdiabaticResult& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.sigma_z.size(); ++j) d = std::max(d, std::abs(a.sigma_z[j] - b.sigma_z[j]));
  for (const auto& [k, v] : a.configuration) d = std::max(d, std::abs(v - b.configuration.at(k)));
  return d;
}

struct SpinPoint {
  double x = 0.0;
  double series = 0.0;
  protocols::AdiabaticResult run;
  double analytic = 0.0;
};

// fig1 and fig2: sigma_1^z(t_f) over a sweep axis for each series value
void run_spin_sweep(const ScenarioSpec& spec, const FigureOptions& opt, Output& out, const std::string& x_column,
                    double x_scale, const std::string& series_column, double series_scale, const std::string& title) {
  const auto& axis = *spec.sweep;
  const auto& series = *spec.series;
  auto analytic_at = [&](const ScenarioSpec& s) {
    return s.force ? analytic::adiabatic_signal_force(s.probe, *s.force).sigma1z
                   : analytic::adiabatic_signal_magnetic(s.probe, *s.magnetic, analytic::SpinOrder::antiferro);
  };

  std::vector<SpinPoint> points;
  for (double s : series.values) {
    for (double x : axis.values) points.push_back({x, s, {}, 0.0});
  }
  parallel_for(points.size(), opt.jobs, [&](std::size_t i) {
    auto& pt = points[i];
    ScenarioSpec local = spec;
    set_parameter(local, series.parameter, pt.series);
    set_parameter(local, axis.parameter, pt.x);
    const std::vector<std::pair<std::string, double>> coords = {{series.parameter, pt.series},
                                                                {axis.parameter, pt.x}};
    pt.run = at_point(coords, [&] {
      return protocols::adiabatic_protocol_run(local.probe, local.perturbation(), adiabatic_options(local, 20));
    });
    pt.analytic = analytic_at(local);
  });

  CsvTable numeric({series_column, x_column, "sigma1z", "sigma2z", "p_ud", "p_du", "norm_drift", "t_final_ms",
                    "analytic_sigma1z", "deviation"});
  PlotSpec plot{title, x_column, "<sigma_1^z(t_f)>", {}, {}};
  std::map<double, PlotSeries> dots;
  for (const auto& pt : points) {
    const double dev = std::abs(pt.run.sigma_z[0] - pt.analytic);
    out.report.max_deviation = std::max(out.report.max_deviation, dev);
    numeric.add_numbers({pt.series / series_scale, pt.x / x_scale, pt.run.sigma_z[0], pt.run.sigma_z[1],
                         pt.run.configuration.at("ud"), pt.run.configuration.at("du"), pt.run.trajectory.norm_drift,
                         pt.run.t_final, pt.analytic, dev});
    auto& d = dots[pt.series];
    d.label = "simulated " + format_number(pt.series / series_scale);
    d.markers = true;
    d.x.push_back(pt.x / x_scale);
    d.y.push_back(pt.run.sigma_z[0]);
  }

  CsvTable closed({series_column, x_column, "sigma1z"});
  const double lo = std::min(axis.values.front(), axis.values.back());
  const double hi = axis.parameter == "phi" ? 2.0 * units::pi : std::max(axis.values.front(), axis.values.back());
  constexpr int kDense = 181;
  for (double s : series.values) {
    PlotSeries line{"closed form " + format_number(s / series_scale), {}, {}, false};
    for (int k = 0; k < kDense; ++k) {
      const double x = lo + (hi - lo) * k / (kDense - 1);
      ScenarioSpec local = spec;
      set_parameter(local, series.parameter, s);
      set_parameter(local, axis.parameter, x);
      const double v = analytic_at(local);
      closed.add_numbers({s / series_scale, x / x_scale, v});
      line.x.push_back(x / x_scale);
      line.y.push_back(v);
    }
    plot.series.push_back(std::move(line));
  }
  for (auto& [s, d] : dots) plot.series.push_back(std::move(d));
  out.csv("_analytic.csv", closed);
  out.csv("_numeric.csv", numeric);
  out.svg(plot);

  const int extra = truncation_extra(opt, 4);
  if (extra > 0) {
    // the point with the largest closed-form signal in the first series
    std::size_t best = 0;
    for (std::size_t i = 0; i < axis.values.size(); ++i) {
      if (std::abs(points[i].analytic) > std::abs(points[best].analytic)) best = i;
    }
    ScenarioSpec raised = spec;
    set_parameter(raised, series.parameter, points[best].series);
    set_parameter(raised, axis.parameter, points[best].x);
    raised.probe.n_max += extra;
    const auto r = at_point({{series.parameter, points[best].series}, {axis.parameter, points[best].x}}, [&] {
      return protocols::adiabatic_protocol_run(raised.probe, raised.perturbation(), adiabatic_options(raised, 20));
    });
    out.report.truncation_delta = adiabatic_delta(points[best].run, r);
    out.report.notes.push_back("truncation check at " + series.parameter + " = " + format_number(points[best].series) +
                               ", " + axis.parameter + " = " + format_number(points[best].x) + " with n_max " +
                               std::to_string(spec.probe.n_max) + " -> " + std::to_string(raised.probe.n_max));
  }
}

void fig1(const ScenarioSpec& spec, const FigureOptions& opt, Output& out) {
  out.report.threshold = 0.05;
  run_spin_sweep(spec, opt, out, "phi_rad", 1.0, "F1_yN", units::yocto_newton, "sigma_1^z(t_f) vs laser phase");
  out.report.metrics.emplace_back("F_minus_min_yN",
                                  analytic::min_detectable_force_adiabatic(spec.probe) / units::yocto_newton);
}

void fig2(const ScenarioSpec& spec, const FigureOptions& opt, Output& out) {
  out.report.threshold = 0.05;
  run_spin_sweep(spec, opt, out, "gamma_krad_s", 1.0, "Bprime_T_per_um", units::tesla_per_micrometre,
                 "sigma_1^z(t_f) vs slope gamma");
  const auto& b = *spec.magnetic;
  const double dz = b.z_positions[1] - b.z_positions[0];
  out.report.metrics.emplace_back("Bprime_min_T_per_um_at_gamma_0.05",
                                  analytic::min_detectable_gradient(0.05, dz, b.lande_g) / units::tesla_per_micrometre);
}

void fig3(const ScenarioSpec& spec, const FigureOptions& opt, Output& out) {
  out.report.threshold = 0.05;
  const auto basis = spec.probe.basis();
  auto opts = adiabatic_options(spec, spec.record_points);
  opts.extra_observables.push_back({"p_ddd", protocols::configuration_projector(basis, {true, true, true})});
  opts.extra_observables.push_back({"p_ddu", protocols::configuration_projector(basis, {true, true, false})});
  const auto run = at_point({{"n_max", spec.probe.n_max}}, [&] {
    return protocols::adiabatic_protocol_run(spec.probe, *spec.force, opts);
  });
  const double a = analytic::adiabatic_signal_force(spec.probe, *spec.force).sigma1z;
  const auto& tr = run.trajectory;

  CsvTable numeric({"t_ms", "sigma1z", "sigma2z", "sigma3z", "p_ddd", "p_ddu", "norm_drift"});
  CsvTable closed({"t_ms", "sigma1z_asymptote", "sigma2z_asymptote"});
  PlotSpec plot{"three-ion chain", "t [ms]", "", {}, {}};
  const char* names[] = {"sz1", "sz2", "sz3", "p_ddd", "p_ddu"};
  for (const char* n : names) plot.series.push_back({n, tr.times, {}, false});
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const auto r = static_cast<Eigen::Index>(k);
    numeric.add_numbers({tr.times[k], tr.values(r, 0), tr.values(r, 1), tr.values(r, 2), tr.values(r, 3),
                         tr.values(r, 4), tr.norm_drift_series[k]});
    closed.add_numbers({tr.times[k], a, -a});
    for (int c = 0; c < 5; ++c) plot.series[static_cast<std::size_t>(c)].y.push_back(tr.values(r, c));
  }
  plot.series.push_back({"closed form", {tr.times.front(), tr.times.back()}, {a, a}, false});
  out.csv("_analytic.csv", closed);
  out.csv("_numeric.csv", numeric);
  out.svg(plot);

  out.report.max_deviation = std::abs(run.sigma_z[0] - a);
  out.report.metrics = {{"sigma1z_final", run.sigma_z[0]},
                        {"sigma2z_final", run.sigma_z[1]},
                        {"sigma3z_final", run.sigma_z[2]},
                        {"sigma1z_closed_form", a},
                        {"p_ddd_final", run.configuration.at("ddd")},
                        {"p_ddu_final", run.configuration.at("ddu")},
                        {"t_final_ms", run.t_final},
                        {"norm_drift", tr.norm_drift}};
  const int extra = truncation_extra(opt, 1);
  if (extra > 0) {
    ScenarioSpec raised = spec;
    raised.probe.n_max += extra;
    const auto r = at_point({{"n_max", raised.probe.n_max}}, [&] {
      return protocols::adiabatic_protocol_run(raised.probe, *raised.force, adiabatic_options(raised, 20));
    });
    out.report.truncation_delta = adiabatic_delta(run, r);
    out.report.notes.push_back("truncation check with n_max " + std::to_string(spec.probe.n_max) + " -> " +
                               std::to_string(raised.probe.n_max));
  }
}

std::vector<double> time_grid(double t_end, int points) {
  std::vector<double> t;
  for (int k = 0; k < points; ++k) t.push_back(t_end * k / (points - 1));
  return t;
}

struct OscillatorSetup {
  analytic::SqueezeDisplaceParams com;
  analytic::SqueezeDisplaceParams rock;
  double t_star_com = 0.0;
  double t_star_rock = 0.0;
};

OscillatorSetup oscillator_setup(const ScenarioSpec& spec) {
  OscillatorSetup s;
  s.com = analytic::squeeze_displace_params(spec.probe, *spec.force, 0);
  s.rock = analytic::squeeze_displace_params(spec.probe, *spec.force, 1);
  s.t_star_com = spec.k_c * s.com.t_star;
  s.t_star_rock = spec.k_r * s.rock.t_star;
  return s;
}

void fig4(const ScenarioSpec& spec, const FigureOptions& opt, Output& out) {
  out.report.threshold = 1e-6;
  const auto s = oscillator_setup(spec);
  const auto times = time_grid(1.2 * std::max(s.t_star_com, s.t_star_rock), std::max(spec.record_points, 2));
  const auto eff = at_point({{"n_max", spec.probe.n_max}}, [&] {
    return protocols::oscillator_run(spec.probe, *spec.force, protocols::OscillatorModel::effective_bosonic, times);
  });
  const auto full = at_point({{"n_max", spec.probe.n_max}}, [&] {
    return protocols::oscillator_run(spec.probe, *spec.force, protocols::OscillatorModel::full, times);
  });

  CsvTable numeric({"t_ms", "n_com_effective", "n_rock_effective", "n_com_full", "n_rock_full", "var_com_full",
                    "var_rock_full"});
  CsvTable closed({"t_ms", "n_com", "n_rock"});
  PlotSpec plot{"mean phonon number", "t [ms]", "<n_q>", {}, {s.t_star_com}};
  PlotSeries lc{"com closed form", times, {}, false}, lr{"rock closed form", times, {}, false};
  PlotSeries dc{"com simulated", times, {}, true}, dr{"rock simulated", times, {}, true};
  double full_rel = 0.0;
  std::size_t peak_c = 0, peak_r = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto r = static_cast<Eigen::Index>(k);
    const double nc = analytic::mean_phonon_signal(s.com, times[k]);
    const double nr = analytic::mean_phonon_signal(s.rock, times[k]);
    numeric.add_numbers({times[k], eff.mean_phonons(r, 0), eff.mean_phonons(r, 1), full.mean_phonons(r, 0),
                         full.mean_phonons(r, 1), full.phonon_variance(r, 0), full.phonon_variance(r, 1)});
    closed.add_numbers({times[k], nc, nr});
    out.report.max_deviation = std::max(
        {out.report.max_deviation, std::abs(eff.mean_phonons(r, 0) - nc), std::abs(eff.mean_phonons(r, 1) - nr)});
    lc.y.push_back(nc);
    lr.y.push_back(nr);
    dc.y.push_back(full.mean_phonons(r, 0));
    dr.y.push_back(full.mean_phonons(r, 1));
    if (nc > lc.y[peak_c]) peak_c = k;
    if (nr > lr.y[peak_r]) peak_r = k;
  }
  full_rel = std::max(std::abs(dc.y[peak_c] - lc.y[peak_c]) / lc.y[peak_c],
                      std::abs(dr.y[peak_r] - lr.y[peak_r]) / lr.y[peak_r]);
  plot.series = {lc, lr, dc, dr};
  out.csv("_analytic.csv", closed);
  out.csv("_numeric.csv", numeric);
  out.svg(plot);

  const double zeta_sq = 4.0 * spec.probe.g[0] * spec.probe.g[0] / (spec.probe.omega0 * spec.probe.delta);
  const auto ks = analytic::kappa_star_solve(spec.probe.delta, zeta_sq, spec.k_c, spec.k_r);
  out.report.metrics = {{"t_star_com_ms", s.t_star_com},
                        {"t_star_rock_ms", s.t_star_rock},
                        {"four_alpha_sq_com", 4.0 * std::norm(s.com.alpha)},
                        {"four_alpha_sq_rock", 4.0 * std::norm(s.rock.alpha)},
                        {"n_com_at_t_star", analytic::mean_phonon_signal(s.com, s.t_star_com)},
                        {"n_rock_at_t_star", analytic::mean_phonon_signal(s.rock, s.t_star_rock)},
                        {"kappa_star_krad_s", ks.kappa},
                        {"kappa_star_residual", ks.residual},
                        {"full_model_relative_deviation_at_maxima", full_rel},
                        {"norm_drift", std::max(eff.norm_drift, full.norm_drift)}};
  const int extra = truncation_extra(opt, 4);
  if (extra > 0) {
    ScenarioSpec raised = spec;
    raised.probe.n_max += extra;
    const auto r = at_point({{"n_max", raised.probe.n_max}}, [&] {
      return protocols::oscillator_run(raised.probe, *raised.force, protocols::OscillatorModel::effective_bosonic,
                                       times);
    });
    out.report.truncation_delta = (r.mean_phonons - eff.mean_phonons).cwiseAbs().maxCoeff();
  }
}

void fig5(const ScenarioSpec& spec, const FigureOptions& opt, Output& out) {
  out.report.threshold = 0.05;
  const auto s = oscillator_setup(spec);
  const auto times = time_grid(1.2 * std::max(s.t_star_com, s.t_star_rock), std::max(spec.record_points, 2));
  ScenarioSpec free = spec;
  set_parameter(free, "g", 0.0);
  const auto full = at_point({{"n_max", spec.probe.n_max}}, [&] {
    return protocols::oscillator_run(spec.probe, *spec.force, protocols::OscillatorModel::full, times);
  });
  const auto base = at_point({{"g", 0.0}}, [&] {
    return protocols::oscillator_run(free.probe, *free.force, protocols::OscillatorModel::effective_bosonic, times);
  });
  auto snr_of = [](double n, double var) { return var > 0.0 ? n / std::sqrt(var) : 0.0; };

  CsvTable numeric({"t_ms", "snr_com", "snr_rock", "snr_com_g0", "snr_rock_g0"});
  CsvTable closed({"t_ms", "n_com", "n_rock", "snr_com_t_star", "snr_rock_t_star"});
  PlotSpec plot{"SNR of phonon readout", "t [ms]", "SNR", {}, {s.t_star_com}};
  PlotSeries pc{"com", times, {}, false}, pr{"rock", times, {}, false};
  PlotSeries bc{"com g = 0", times, {}, false}, br{"rock g = 0", times, {}, false};
  const double ref_c = 2.0 * std::abs(s.com.alpha), ref_r = 2.0 * std::abs(s.rock.alpha);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto r = static_cast<Eigen::Index>(k);
    const double sc = snr_of(full.mean_phonons(r, 0), full.phonon_variance(r, 0));
    const double sr = snr_of(full.mean_phonons(r, 1), full.phonon_variance(r, 1));
    const double s0c = snr_of(base.mean_phonons(r, 0), base.phonon_variance(r, 0));
    const double s0r = snr_of(base.mean_phonons(r, 1), base.phonon_variance(r, 1));
    numeric.add_numbers({times[k], sc, sr, s0c, s0r});
    closed.add_numbers({times[k], analytic::mean_phonon_signal(s.com, times[k]),
                        analytic::mean_phonon_signal(s.rock, times[k]), ref_c, ref_r});
    pc.y.push_back(sc);
    pr.y.push_back(sr);
    bc.y.push_back(s0c);
    br.y.push_back(s0r);
  }
  plot.series = {pc, pr, bc, br};
  out.csv("_analytic.csv", closed);
  out.csv("_numeric.csv", numeric);
  out.svg(plot);

  // SNR at each mode's own readout time against 2 |alpha_q|
  const auto at_c = protocols::oscillator_run(spec.probe, *spec.force, protocols::OscillatorModel::full, {s.t_star_com});
  const auto at_r =
      protocols::oscillator_run(spec.probe, *spec.force, protocols::OscillatorModel::full, {s.t_star_rock});
  const double snr_c = snr_of(at_c.mean_phonons(0, 0), at_c.phonon_variance(0, 0));
  const double snr_r = snr_of(at_r.mean_phonons(0, 1), at_r.phonon_variance(0, 1));
  out.report.max_deviation = std::max(std::abs(snr_c - ref_c) / ref_c, std::abs(snr_r - ref_r) / ref_r);

  // SNR of the rock mode for F_- = 2.5 yN with and without spin-phonon coupling
  ScenarioSpec probe_25 = spec;
  probe_25.force->force = {spec.force->force[1] + 2.5 * units::yocto_newton, spec.force->force[1]};
  ScenarioSpec free_25 = probe_25;
  set_parameter(free_25, "g", 0.0);
  const double strong_25 = 2.0 * std::abs(analytic::squeeze_displace_params(probe_25.probe, *probe_25.force, 1).alpha);
  const double free_snr_25 = 2.0 * std::abs(analytic::squeeze_displace_params(free_25.probe, *free_25.force, 1).alpha);

  const auto& rock = s.rock;
  out.report.metrics = {{"snr_com_at_t_star", snr_c},
                        {"snr_rock_at_t_star", snr_r},
                        {"two_alpha_com", ref_c},
                        {"two_alpha_rock", ref_r},
                        {"F_rock_min_yN", analytic::min_detectable_force_cho(rock.omega_q, rock.zeta_sq, spec.probe.x0) /
                                              units::yocto_newton},
                        {"snr_rock_F_minus_2.5yN", strong_25},
                        {"snr_rock_F_minus_2.5yN_g0", free_snr_25}};
  const int extra = truncation_extra(opt, 4);
  if (extra > 0) {
    ScenarioSpec raised = spec;
    raised.probe.n_max += extra;
    const auto r = at_point({{"n_max", raised.probe.n_max}}, [&] {
      return protocols::oscillator_run(raised.probe, *raised.force, protocols::OscillatorModel::full, {s.t_star_rock});
    });
    out.report.truncation_delta = std::abs(r.mean_phonons(0, 1) - at_r.mean_phonons(0, 1));
  }
}

void write_report(const FigureReport& r, const std::string& path) {
  ordered_json j;
  j["figure"] = r.name;
  j["max_deviation"] = r.max_deviation;
  j["threshold"] = r.threshold;
  j["within_threshold"] = r.within_threshold();
  if (std::isnan(r.truncation_delta)) j["truncation_delta"] = nullptr;
  else j["truncation_delta"] = r.truncation_delta;
  ordered_json m = ordered_json::object();
  for (const auto& [k, v] : r.metrics) m[k] = v;
  j["metrics"] = m;
  j["notes"] = r.notes;
  j["files"] = r.files;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace

FigureReport run_figure(const std::string& name, const FigureOptions& options) {
  const ScenarioSpec spec = figure_spec(name, options);
  fs::create_directories(options.out_dir);
  const auto start = std::chrono::steady_clock::now();
  FigureReport report;
  report.name = name;
  Output out{options, report};
  if (name == "fig1") fig1(spec, options, out);
  else if (name == "fig2") fig2(spec, options, out);
  else if (name == "fig3") fig3(spec, options, out);
  else if (name == "fig4") fig4(spec, options, out);
  else fig5(spec, options, out);
  report.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::string json_path = out.path("_report.json");
  report.files.push_back(json_path);
  write_report(report, json_path);
  return report;
}

}  // namespace gradsense::cli
