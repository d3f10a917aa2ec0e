#include "gradsense/expmv.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "gradsense/diagnostics.hpp"

namespace gradsense::dynamics {

using hilbert::cplx;
using hilbert::Vector;

HermitianGenerator::HermitianGenerator(const hilbert::SparseMatrix& h) : dim_(h.rows()) {
  if (h.rows() != h.cols()) throw std::invalid_argument("generator must be square");
  dense_ = dim_ < kDenseThreshold;
  if (dense_) {
    const hilbert::DenseMatrix hd(h);
    Eigen::SelfAdjointEigenSolver<hilbert::DenseMatrix> solver(hd);
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
  } else {
    sparse_ = &h;
  }
}

void HermitianGenerator::multiply(const Vector& in, Vector& out) const {
  ++stats_.matvecs;
  if (dense_) {
    out = eigenvectors_ * eigenvalues_.asDiagonal() * (eigenvectors_.adjoint() * in);
  } else {
    out.noalias() = (*sparse_) * in;
  }
}

Vector HermitianGenerator::evolve_dense(const Vector& v, double tau) const {
  Vector c = eigenvectors_.adjoint() * v;
  for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::exp(cplx(0.0, -tau * eigenvalues_(k)));
  return eigenvectors_ * c;
}

// One Lanczos projection of exp(-i H tau) v with full reorthogonalisation.
// Returns false when the a-posteriori error estimate fails at max_krylov.
bool HermitianGenerator::krylov_step(const Vector& v, double tau, Vector& out, int& used) const {
  const double beta0 = v.norm();
  if (beta0 == 0.0) {
    out = v;
    used = 0;
    return true;
  }
  const int m_max = static_cast<int>(std::min<Eigen::Index>(max_krylov, dim_));
  hilbert::DenseMatrix q(dim_, m_max + 1);
  std::vector<double> alpha;
  std::vector<double> beta;
  q.col(0) = v / beta0;
  Vector w(dim_);

  auto small_exp_first_column = [&](int m) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) t(i, i) = alpha[static_cast<std::size_t>(i)];
    for (int i = 0; i + 1 < m; ++i) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    Eigen::VectorXcd phase(m);
    for (int i = 0; i < m; ++i) phase(i) = std::exp(cplx(0.0, -tau * es.eigenvalues()(i)));
    Eigen::VectorXcd first = es.eigenvectors().cast<cplx>() * (phase.asDiagonal() * es.eigenvectors().row(0).transpose().cast<cplx>());
    return first;
  };

  for (int j = 0; j < m_max; ++j) {
    multiply(q.col(j), w);
    // two passes of classical Gram-Schmidt against the whole basis
    for (int pass = 0; pass < 2; ++pass) {
      Eigen::VectorXcd coeff = q.leftCols(j + 1).adjoint() * w;
      w -= q.leftCols(j + 1) * coeff;
      if (pass == 0) alpha.push_back(coeff(j).real());
      else alpha.back() += coeff(j).real();
    }
    const double b = w.norm();
    const int m = j + 1;
    const bool breakdown = b < 1e-14 * std::max(1.0, std::abs(alpha.back()));
    const bool check = breakdown || m == m_max || (m >= 6 && m % 3 == 0);
    if (check) {
      const Eigen::VectorXcd first = small_exp_first_column(m);
      const double err = breakdown ? 0.0 : beta0 * b * std::abs(first(m - 1));
      if (err <= tolerance) {
        out = beta0 * (q.leftCols(m) * first);
        used = m;
        return true;
      }
      if (m == m_max) {
        used = m;
        return false;
      }
    }
    beta.push_back(b);
    q.col(j + 1) = w / b;
  }
  used = m_max;
  return false;
}

Vector HermitianGenerator::evolve(const Vector& v, double tau) const {
  if (v.size() != dim_) throw std::invalid_argument("vector length does not match generator");
  if (tau == 0.0) return v;
  if (dense_) return evolve_dense(v, tau);

  Vector current = v;
  double remaining = tau;
  const double sign = tau > 0.0 ? 1.0 : -1.0;
  double sub = suggested_tau_ > 0.0 ? suggested_tau_ : std::abs(tau);
  int failures = 0;
  while (std::abs(remaining) > 0.0) {
    const bool clipped = sub >= std::abs(remaining);
    const double this_sub = clipped ? std::abs(remaining) : sub;
    Vector next;
    int used = 0;
    if (krylov_step(current, sign * this_sub, next, used)) {
      ++stats_.substeps;
      current = std::move(next);
      remaining -= sign * this_sub;
      if (std::abs(remaining) < 1e-15 * std::abs(tau)) remaining = 0.0;
      // a clipped final substep says nothing about the affordable size
      if (!clipped) {
        if (used < max_krylov / 3) sub *= 2.0;
        else if (used < max_krylov / 2) sub *= 1.5;
      }
      suggested_tau_ = sub;
      failures = 0;
    } else {
      sub = 0.5 * this_sub;
      suggested_tau_ = sub;
      if (++failures > 60) throw NumericalError("Krylov exponential failed to converge");
    }
  }
  return current;
}

}  // namespace gradsense::dynamics
