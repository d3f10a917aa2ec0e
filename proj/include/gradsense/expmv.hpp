#pragma once

#include "gradsense/hilbert.hpp"

namespace gradsense::dynamics {

/// Hermitian generator for exp(-i H tau) v. Dimensions below
/// kDenseThreshold are handled by a dense eigendecomposition; larger ones
/// by a Lanczos Krylov projection.
class HermitianGenerator {
 public:
  static constexpr Eigen::Index kDenseThreshold = 64;

  explicit HermitianGenerator(const hilbert::SparseMatrix& h);

  Eigen::Index dimension() const { return dim_; }
  bool is_dense() const { return dense_; }
  void multiply(const hilbert::Vector& in, hilbert::Vector& out) const;

  /// exp(-i H tau) v.
  hilbert::Vector evolve(const hilbert::Vector& v, double tau) const;

  struct Stats {
    long matvecs = 0;
    long substeps = 0;
  };
  const Stats& stats() const { return stats_; }

  /// Krylov substep carried over between generators of neighbouring steps.
  double substep_hint() const { return suggested_tau_; }
  void set_substep_hint(double tau) { suggested_tau_ = tau; }

  /// Absolute Krylov error target per substep.
  double tolerance = 1e-13;
  int max_krylov = 40;

 private:
  hilbert::Vector evolve_dense(const hilbert::Vector& v, double tau) const;
  bool krylov_step(const hilbert::Vector& v, double tau, hilbert::Vector& out, int& used) const;

  Eigen::Index dim_ = 0;
  bool dense_ = false;
  const hilbert::SparseMatrix* sparse_ = nullptr;
  Eigen::VectorXd eigenvalues_;
  hilbert::DenseMatrix eigenvectors_;
  mutable Stats stats_;
  mutable double suggested_tau_ = 0.0;
};

}  // namespace gradsense::dynamics
