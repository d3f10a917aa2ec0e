#include "gradsense/cli/sweep.hpp"

#include <cmath>
#include <limits>

#include "gradsense/analytic.hpp"
#include "gradsense/diagnostics.hpp"
#include "gradsense/metrology.hpp"
#include "gradsense/protocols.hpp"

namespace gradsense::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

analytic::Estimand estimand_of(const ScenarioSpec& spec) {
  return spec.estimand == "phase" ? analytic::Estimand::phase : analytic::Estimand::force;
}

PointResult adiabatic_point(const ScenarioSpec& spec) {
  const auto& p = spec.probe;
  PointResult r;
  r.t_final = spec.t_final > 0.0 ? spec.t_final : protocols::default_final_time(p);
  if (spec.method == Method::numeric) {
    protocols::AdiabaticOptions opt;
    opt.t_final = r.t_final;
    opt.tolerance = spec.tolerance;
    opt.record_points = 20;
    r.signal = protocols::adiabatic_protocol_run(p, spec.perturbation(), opt).sigma_z.at(0);
  }
  if (spec.force) {
    const auto& f = *spec.force;
    if (spec.method == Method::analytic) r.signal = analytic::adiabatic_signal_force(p, f).sigma1z;
    r.fisher_classical = analytic::classical_fisher(p, f, estimand_of(spec));
    r.fisher_quantum = analytic::qfi_adiabatic(p, f, r.t_final, estimand_of(spec));
    r.min_detectable = spec.estimand == "force" ? analytic::min_detectable_force_adiabatic(p) : kNaN;
  } else {
    const auto& b = *spec.magnetic;
    if (spec.method == Method::analytic) {
      r.signal = analytic::adiabatic_signal_magnetic(p, b, analytic::SpinOrder::antiferro);
    }
    r.fisher_classical = analytic::classical_fisher_gradient(p, b);
    r.fisher_quantum = analytic::qfi_adiabatic_gradient(p, b, r.t_final);
    r.min_detectable = analytic::min_detectable_gradient(p.gamma, b.z_positions.at(1) - b.z_positions.at(0), b.lande_g);
  }
  r.snr = metrology::snr(r.signal, metrology::spin_variance(r.signal));
  return r;
}

PointResult oscillator_point(const ScenarioSpec& spec) {
  const auto& p = spec.probe;
  const auto& f = *spec.force;
  const int mode = spec.mode == "com" ? 0 : 1;
  const auto sd = analytic::squeeze_displace_params(p, f, mode);
  PointResult r;
  r.t_final = (mode == 0 ? spec.k_c : spec.k_r) * sd.t_star;
  double mean = 0.0;
  double variance = 0.0;
  if (spec.method == Method::numeric) {
    const auto run = protocols::oscillator_run(p, f, protocols::OscillatorModel::effective_bosonic, {r.t_final});
    mean = run.mean_phonons(0, mode);
    variance = run.phonon_variance(0, mode);
  } else {
    // at odd multiples of pi / theta the state is coherent with amplitude 2 alpha
    mean = analytic::mean_phonon_signal(sd, r.t_final);
    variance = mean;
  }
  r.signal = mean;
  r.snr = metrology::snr(mean, variance);
  // photon-counting statistics are Poissonian at the readout time
  auto mean_at = [&](double shift) {
    models::ForceField g = f;
    if (spec.estimand == "phase") {
      g.xi += shift;
    } else {
      // F_q = F1 +- F2 moves with F1 for either mode
      g.force[0] += shift;
    }
    return analytic::mean_phonon_signal(analytic::squeeze_displace_params(p, g, mode), r.t_final);
  };
  const double scale = spec.estimand == "phase" ? 1e-4 : 1e-4 * std::max(std::abs(sd.force), 1e-24);
  const double dmean = (mean_at(scale) - mean_at(-scale)) / (2.0 * scale);
  const double mu = analytic::mean_phonon_signal(sd, r.t_final);
  r.fisher_classical = mu > 0.0 ? dmean * dmean / mu : 0.0;
  const auto fq = analytic::qfi_cho(sd, estimand_of(spec), p.phi.at(0), f.xi);
  r.fisher_quantum = fq.value;
  r.fisher_quantum_diverges = fq.diverges;
  r.min_detectable = spec.estimand == "force" ? analytic::min_detectable_force_cho(sd.omega_q, sd.zeta_sq, p.x0) : kNaN;
  return r;
}

}  // namespace

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex m;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, n); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(m);
          if (!first) first = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

PointResult evaluate_point(const ScenarioSpec& spec) {
  spec.validate();
  return spec.protocol == Protocol::oscillator ? oscillator_point(spec) : adiabatic_point(spec);
}

CsvTable run_sweep(const ScenarioSpec& spec, int jobs) {
  spec.validate();
  if (!spec.sweep) throw ConfigError("sweep requires a [sweep] section with a parameter");
  const auto& axis = *spec.sweep;
  const std::vector<double> series = spec.series ? spec.series->values : std::vector<double>{kNaN};

  std::vector<std::string> header = {axis.parameter};
  if (spec.series) header.push_back(spec.series->parameter);
  for (const char* c : {"signal", "snr", "fisher_classical", "fisher_quantum", "min_detectable", "t_final", "error"}) {
    header.emplace_back(c);
  }

  struct Slot {
    double x = 0.0;
    double s = 0.0;
    PointResult r;
    std::string error;
  };
  std::vector<Slot> slots;
  for (double s : series) {
    for (double x : axis.values) slots.push_back({x, s, {}, {}});
  }
  parallel_for(slots.size(), jobs, [&](std::size_t i) {
    Slot& slot = slots[i];
    ScenarioSpec local = spec;
    try {
      if (spec.series) set_parameter(local, spec.series->parameter, slot.s);
      set_parameter(local, axis.parameter, slot.x);
      slot.r = evaluate_point(local);
    } catch (const std::exception& e) {
      slot.error = e.what();
    }
  });

  // rows sorted by series then axis value
  std::vector<std::size_t> order(slots.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (slots[a].s != slots[b].s && spec.series) return slots[a].s < slots[b].s;
    return slots[a].x < slots[b].x;
  });

  CsvTable table(header);
  for (std::size_t i : order) {
    const Slot& s = slots[i];
    std::vector<std::string> row = {format_number(s.x)};
    if (spec.series) row.push_back(format_number(s.s));
    if (s.error.empty()) {
      row.push_back(format_number(s.r.signal));
      row.push_back(format_number(s.r.snr));
      row.push_back(format_number(s.r.fisher_classical));
      row.push_back(s.r.fisher_quantum_diverges ? "inf" : format_number(s.r.fisher_quantum));
      row.push_back(format_number(s.r.min_detectable));
      row.push_back(format_number(s.r.t_final));
      row.emplace_back();
    } else {
      for (int k = 0; k < 6; ++k) row.emplace_back();
      row.push_back(s.error);
    }
    table.add_row(std::move(row));
  }
  return table;
}

}  // namespace gradsense::cli
