#include "gradsense/dynamics.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "gradsense/diagnostics.hpp"
#include "gradsense/expmv.hpp"

namespace gradsense::dynamics {

using hilbert::BasisDescriptor;
using hilbert::CompositeState;
using hilbert::cplx;
using hilbert::SparseMatrix;
using hilbert::Vector;

void PropagationConfig::validate() const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (!(t_final > t_start)) throw std::invalid_argument("t_final must exceed t_start");
  if (record_points < 1) throw std::invalid_argument("record_points must be >= 1");
  if (min_step < 0.0 || max_step < 0.0) throw std::invalid_argument("step bounds must be nonnegative");
}

Eigen::VectorXd Trajectory::column(const std::string& name) const {
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (names[k] == name) return values.col(static_cast<Eigen::Index>(k));
  }
  throw std::out_of_range("no observable named " + name);
}

namespace {

constexpr double kRoundingFloor = 100.0 * 2.220446049250313e-16;

const cplx I{0.0, 1.0};

// One step of the commutator-free fourth-order Magnus scheme.
class MagnusStepper {
 public:
  MagnusStepper(const TimeDependentHamiltonian& h, double krylov_tolerance)
      : h_(h), krylov_tolerance_(krylov_tolerance) {}

  Vector step(const Vector& psi, double t, double dt) {
    static const double s3 = std::sqrt(3.0);
    const double c1 = 0.5 - s3 / 6.0;
    const double c2 = 0.5 + s3 / 6.0;
    const double a1 = 0.25 - s3 / 6.0;
    const double a2 = 0.25 + s3 / 6.0;
    const SparseMatrix h1 = h_.at(t + c1 * dt);
    const SparseMatrix h2 = h_.at(t + c2 * dt);
    const SparseMatrix first = a2 * h1 + a1 * h2;
    const SparseMatrix second = a1 * h1 + a2 * h2;
    Vector out = apply_exp(first, psi, dt);
    return apply_exp(second, out, dt);
  }

  long matvecs = 0;

 private:
  Vector apply_exp(const SparseMatrix& m, const Vector& v, double dt) {
    HermitianGenerator gen(m);
    gen.tolerance = krylov_tolerance_;
    gen.set_substep_hint(hint_);
    Vector out = gen.evolve(v, dt);
    if (!gen.is_dense()) hint_ = gen.substep_hint();
    matvecs += gen.stats().matvecs;
    return out;
  }

  const TimeDependentHamiltonian& h_;
  double krylov_tolerance_;
  double hint_ = 0.0;
};

// Dormand-Prince 5(4) tableau.
struct DormandPrince {
  static constexpr std::array<double, 7> c{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr double a[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
  };
  static constexpr std::array<double, 7> b5{35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0.0};
  static constexpr std::array<double, 7> b4{5179.0 / 57600, 0.0,          7571.0 / 16695, 393.0 / 640,
                                            -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
};

struct Recorder {
  const PropagationConfig& cfg;
  const StateObserver& observer;
  Trajectory& traj;
  int row = 0;

  void record(double t, const CompositeState& psi) {
    const double drift = std::abs(psi.norm() - 1.0);
    traj.times.push_back(t);
    traj.norm_drift_series.push_back(drift);
    traj.norm_drift = std::max(traj.norm_drift, drift);
    for (std::size_t k = 0; k < cfg.observables.size(); ++k) {
      const cplx v = hilbert::expectation(psi, cfg.observables[k].op);
      traj.values(row, static_cast<Eigen::Index>(k)) = v.real();
      traj.imag_residuals(row, static_cast<Eigen::Index>(k)) = v.imag();
    }
    ++row;
    if (observer) observer(t, psi);
    if (drift > cfg.norm_tolerance) {
      std::ostringstream os;
      os << "norm drift " << drift << " exceeds " << cfg.norm_tolerance << " at t = " << t;
      throw NumericalError(os.str());
    }
    const auto& basis = psi.basis();
    for (int m = 0; m < basis.num_modes(); ++m) {
      const double top = hilbert::top_level_population(psi, m, 2);
      if (top > cfg.truncation_threshold) {
        std::ostringstream os;
        os << "truncation overflow: population " << top << " in the top two Fock levels of mode "
           << basis.mode_labels()[m] << " at t = " << t << " (raise n_max above " << basis.fock_dims()[m] << ")";
        throw NumericalError(os.str());
      }
    }
  }
};

}  // namespace

Trajectory propagate(const TimeDependentHamiltonian& h, const CompositeState& psi0, const PropagationConfig& cfg,
                     const StateObserver& observer) {
  cfg.validate();
  hilbert::require_same_basis(h.basis(), psi0.basis());
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw std::invalid_argument("initial state is not normalized");
  for (const auto& o : cfg.observables) hilbert::require_same_basis(h.basis(), o.op.basis());

  Trajectory traj;
  for (const auto& o : cfg.observables) traj.names.push_back(o.name);
  const auto n_obs = static_cast<Eigen::Index>(cfg.observables.size());
  traj.values.resize(cfg.record_points + 1, n_obs);
  traj.imag_residuals.resize(cfg.record_points + 1, n_obs);

  Recorder rec{cfg, observer, traj};
  const BasisDescriptor& basis = psi0.basis();
  Vector psi = psi0.amplitudes();
  rec.record(cfg.t_start, psi0);

  const double span = cfg.t_final - cfg.t_start;
  auto record_time = [&](int k) { return k == cfg.record_points ? cfg.t_final : cfg.t_start + span * k / cfg.record_points; };

  if (h.is_static()) {
    const SparseMatrix m = h.at(cfg.t_start);
    HermitianGenerator gen(m);
    double t = cfg.t_start;
    for (int k = 1; k <= cfg.record_points; ++k) {
      const double tk = record_time(k);
      psi = gen.evolve(psi, tk - t);
      t = tk;
      ++traj.steps_accepted;
      rec.record(t, CompositeState(basis, psi));
    }
    traj.final_state = CompositeState(basis, psi);
    return traj;
  }

  double t = cfg.t_start;
  double dt = span / cfg.record_points;
  if (cfg.max_step > 0.0) dt = std::min(dt, cfg.max_step);

  if (cfg.method == Method::magnus4) {
    // Krylov error well below the per-step budget, capped so that it never
    // dominates the norm drift.
    const double ktol = std::min(1e-9, 1e-3 * cfg.tolerance);
    MagnusStepper stepper(h, ktol);
    for (int k = 1; k <= cfg.record_points; ++k) {
      const double tk = record_time(k);
      while (t < tk) {
        // rounding leftovers of the record grid
        if (tk - t <= 1e-12 * std::max(1.0, std::abs(tk))) {
          t = tk;
          break;
        }
        const bool last = t + dt >= tk;
        const double step = last ? tk - t : dt;
        if (step < cfg.min_step && !last) throw NumericalError("step size underflow at t = " + std::to_string(t));
        const Vector full = stepper.step(psi, t, step);
        const Vector mid = stepper.step(psi, t, 0.5 * step);
        const Vector half = stepper.step(mid, t + 0.5 * step, 0.5 * step);
        const double err = (half - full).norm() / 15.0;
        // below ~100 ulp the error estimate is rounding noise
        const double target = std::max(cfg.tolerance * step, kRoundingFloor);
        const double factor = err > 0.0 ? std::clamp(0.9 * std::pow(target / err, 0.25), 0.2, 4.0) : 4.0;
        if (err <= target) {
          psi = half;
          t = last ? tk : t + step;
          ++traj.steps_accepted;
          // keep the pre-clamp step when a record time shortened this one
          if (!last || factor < 1.0) dt = step * factor;
        } else {
          ++traj.steps_rejected;
          dt = step * factor;
          if (dt < cfg.min_step) {
            std::ostringstream os;
            os << "step size underflow (" << dt << ") at t = " << t;
            throw NumericalError(os.str());
          }
        }
        if (cfg.max_step > 0.0) dt = std::min(dt, cfg.max_step);
      }
      rec.record(t, CompositeState(basis, psi));
    }
  } else {
    // The mean energy e is removed from H for the duration of each step and
    // restored as an exact phase factor, so the error control sees only the
    // relative phases.
    using DP = DormandPrince;
    std::array<Vector, 7> kst;
    auto f = [&](double tt, const Vector& y, double e) -> Vector { return -I * (h.apply(tt, y) - e * y); };
    kst[0] = -I * h.apply(t, psi);
    double e = (I * psi.dot(kst[0])).real();
    kst[0] += I * e * psi;
    for (int k = 1; k <= cfg.record_points; ++k) {
      const double tk = record_time(k);
      while (t < tk) {
        // rounding leftovers of the record grid
        if (tk - t <= 1e-12 * std::max(1.0, std::abs(tk))) {
          t = tk;
          break;
        }
        const bool last = t + dt >= tk;
        const double step = last ? tk - t : dt;
        for (int s = 1; s < 7; ++s) {
          Vector y = psi;
          for (int j = 0; j < s; ++j) {
            if (DP::a[s][j] != 0.0) y += step * DP::a[s][j] * kst[static_cast<std::size_t>(j)];
          }
          kst[static_cast<std::size_t>(s)] = f(t + DP::c[static_cast<std::size_t>(s)] * step, y, e);
        }
        Vector y5 = psi;
        Vector diff = Vector::Zero(psi.size());
        for (std::size_t s = 0; s < 7; ++s) {
          y5 += step * DP::b5[s] * kst[s];
          diff += step * (DP::b5[s] - DP::b4[s]) * kst[s];
        }
        const double err = diff.norm();
        // below ~100 ulp the error estimate is rounding noise
        const double target = std::max(cfg.tolerance * step, kRoundingFloor);
        const double factor = err > 0.0 ? std::clamp(0.9 * std::pow(target / err, 0.2), 0.2, 5.0) : 5.0;
        if (err <= target) {
          // FSAL: kst[6] = -i (H - e) y5 at the new time
          const double e_new = e + (I * y5.dot(kst[6])).real() / y5.squaredNorm();
          const cplx phase = std::exp(-I * (e * step));
          kst[0] = phase * (kst[6] + I * (e_new - e) * y5);
          psi = phase * y5;
          e = e_new;
          t = last ? tk : t + step;
          ++traj.steps_accepted;
          if (!last || factor < 1.0) dt = step * factor;
        } else {
          ++traj.steps_rejected;
          dt = step * factor;
          if (dt < cfg.min_step) {
            std::ostringstream os;
            os << "step size underflow (" << dt << ") at t = " << t;
            throw NumericalError(os.str());
          }
        }
        if (cfg.max_step > 0.0) dt = std::min(dt, cfg.max_step);
      }
      rec.record(t, CompositeState(basis, psi));
    }
  }
  traj.final_state = CompositeState(basis, psi);
  return traj;
}

TwoStateAmplitudes demkov_integrate(double alpha, double delta_c0, double gamma, double t_final,
                                    std::pair<cplx, cplx> c0, int record_points, double tolerance, Method method) {
  if (std::abs(std::norm(c0.first) + std::norm(c0.second) - 1.0) > 1e-12) {
    throw std::invalid_argument("initial amplitudes are not normalized");
  }
  if (gamma < 0.0) throw DomainError("gamma must be nonnegative");
  const BasisDescriptor basis(1, {});
  const auto sz = hilbert::pauli_op(basis, 0, hilbert::Axis::z);
  const auto sx = hilbert::pauli_op(basis, 0, hilbert::Axis::x);
  TimeDependentHamiltonian h(-alpha * sz);
  h.add_modulated(-delta_c0 * sx, [gamma](double t) { return std::exp(-2.0 * gamma * t); });

  Vector amp(2);
  amp << c0.first, c0.second;
  PropagationConfig cfg;
  cfg.t_final = t_final;
  cfg.tolerance = tolerance;
  cfg.record_points = record_points;
  cfg.method = method;
  cfg.min_step = 0.0;

  TwoStateAmplitudes out;
  out.alpha = alpha;
  out.delta_c0 = delta_c0;
  out.gamma = gamma;
  propagate(h, CompositeState(basis, amp), cfg, [&](double t, const CompositeState& psi) {
    out.times.push_back(t);
    out.c_plus.push_back(psi.amplitudes()(0));
    out.c_minus.push_back(psi.amplitudes()(1));
  });
  return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  std::ostringstream buf;
  buf.imbue(std::locale::classic());
  buf.precision(12);
  buf << 't';
  for (const auto& n : traj.names) buf << ',' << n;
  buf << ",norm_drift\n";
  for (std::size_t r = 0; r < traj.times.size(); ++r) {
    buf << traj.times[r];
    for (Eigen::Index c = 0; c < traj.values.cols(); ++c) buf << ',' << traj.values(static_cast<Eigen::Index>(r), c);
    buf << ',' << traj.norm_drift_series[r] << '\n';
  }
  os << buf.str();
}

namespace {

constexpr char kMagic[4] = {'G', 'S', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& os, T v) {
  static_assert(std::endian::native == std::endian::little, "checkpoint writer assumes a little-endian host");
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw std::runtime_error("truncated checkpoint");
  return v;
}

}  // namespace

void write_checkpoint(std::ostream& os, const CompositeState& state) {
  const auto& basis = state.basis();
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(basis.num_spins()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(basis.num_modes()));
  for (int d : basis.fock_dims()) put<std::uint32_t>(os, static_cast<std::uint32_t>(d));
  for (const auto& label : basis.mode_labels()) {
    put<std::uint32_t>(os, static_cast<std::uint32_t>(label.size()));
    os.write(label.data(), static_cast<std::streamsize>(label.size()));
  }
  const auto& a = state.amplitudes();
  put<std::uint64_t>(os, static_cast<std::uint64_t>(a.size()));
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    put<double>(os, a(i).real());
    put<double>(os, a(i).imag());
  }
}

CompositeState read_checkpoint(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("not a state checkpoint");
  if (get<std::uint32_t>(is) != kVersion) throw std::runtime_error("unsupported checkpoint version");
  const auto spins = static_cast<int>(get<std::uint32_t>(is));
  const auto modes = get<std::uint32_t>(is);
  if (modes > 64) throw std::runtime_error("corrupt checkpoint header");
  std::vector<int> dims;
  for (std::uint32_t m = 0; m < modes; ++m) dims.push_back(static_cast<int>(get<std::uint32_t>(is)));
  std::vector<std::string> labels;
  for (std::uint32_t m = 0; m < modes; ++m) {
    const auto len = get<std::uint32_t>(is);
    if (len > 4096) throw std::runtime_error("corrupt checkpoint label");
    std::string s(len, '\0');
    is.read(s.data(), len);
    if (!is) throw std::runtime_error("truncated checkpoint");
    labels.push_back(std::move(s));
  }
  BasisDescriptor basis(spins, dims, labels);
  const auto n = get<std::uint64_t>(is);
  if (n != basis.dimension()) throw std::runtime_error("checkpoint amplitude count does not match basis");
  Vector a(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double re = get<double>(is);
    const double im = get<double>(is);
    a(i) = cplx(re, im);
  }
  return CompositeState(basis, a);
}

}  // namespace gradsense::dynamics
