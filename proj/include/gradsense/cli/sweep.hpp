#pragma once

// Parameter sweeps over a ScenarioSpec with a worker pool and
// deterministic output order.

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "gradsense/cli/config.hpp"
#include "gradsense/cli/csv.hpp"

namespace gradsense::cli {

/// Run fn(i) for i in [0, n) on `jobs` threads. Results must be written by
/// index; the first exception is rethrown after all workers stop.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

struct PointResult {
  double signal = 0.0;
  double snr = 0.0;
  double fisher_classical = 0.0;
  double fisher_quantum = 0.0;
  bool fisher_quantum_diverges = false;
  double min_detectable = 0.0;  ///< NaN when not defined for the estimand
  double t_final = 0.0;         ///< readout time [ms]
};

/// Signal, SNR, Fisher informations and minimal detectable value at the
/// current parameters of `spec` (analytic or simulated according to spec.method).
PointResult evaluate_point(const ScenarioSpec& spec);

/// CSV columns: <axis>[,<series>],signal,snr,fisher_classical,fisher_quantum,min_detectable,t_final,error.
/// Failures at single points land in the error column.
CsvTable run_sweep(const ScenarioSpec& spec, int jobs = 1);

}  // namespace gradsense::cli
