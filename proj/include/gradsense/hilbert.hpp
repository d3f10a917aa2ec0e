#pragma once

// Truncated spin (x) Fock product spaces and the operators acting on them.
//
// Basis ordering: spins first (spin 0 most significant), then modes (mode 0
// most significant). Per spin |up> has index 0 and |down> index 1.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace gradsense::hilbert {

using cplx = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Vector = Eigen::VectorXcd;
using DenseMatrix = Eigen::MatrixXcd;

enum class Axis { x, y, z };

class BasisDescriptor {
 public:
  BasisDescriptor() = default;
  BasisDescriptor(int num_spins, std::vector<int> fock_dims, std::vector<std::string> mode_labels = {});

  int num_spins() const { return num_spins_; }
  int num_modes() const { return static_cast<int>(fock_dims_.size()); }
  const std::vector<int>& fock_dims() const { return fock_dims_; }
  const std::vector<std::string>& mode_labels() const { return mode_labels_; }

  std::size_t spin_dimension() const { return std::size_t{1} << num_spins_; }
  std::size_t mode_dimension() const;
  std::size_t dimension() const { return spin_dimension() * mode_dimension(); }

  /// Flat index of |spins>|occupations>; spins[j] is true for |down>.
  std::size_t index(std::span<const bool> spin_down, std::span<const int> occupations) const;
  /// Occupation of `mode` in basis state `flat_index`.
  int occupation(std::size_t flat_index, int mode) const;
  /// True when spin `spin` is |down> in basis state `flat_index`.
  bool spin_down(std::size_t flat_index, int spin) const;

  /// Same basis with every Fock dimension set to `n_max`.
  BasisDescriptor with_truncation(int n_max) const;

  bool operator==(const BasisDescriptor&) const = default;

 private:
  int num_spins_ = 0;
  std::vector<int> fock_dims_;
  std::vector<std::string> mode_labels_;
};

/// Throws std::invalid_argument when the two descriptors differ.
void require_same_basis(const BasisDescriptor& a, const BasisDescriptor& b);

class CompositeState;

class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  OperatorMatrix(BasisDescriptor basis, SparseMatrix entries);

  static OperatorMatrix zero(const BasisDescriptor& basis);
  static OperatorMatrix identity(const BasisDescriptor& basis);

  const BasisDescriptor& basis() const { return basis_; }
  const SparseMatrix& matrix() const { return entries_; }
  std::size_t dimension() const { return basis_.dimension(); }

  OperatorMatrix adjoint() const;
  DenseMatrix dense() const { return DenseMatrix(entries_); }
  /// max |H - H^dagger| over all entries.
  double hermiticity_defect() const;

  Vector apply(const Vector& v) const;
  CompositeState apply(const CompositeState& psi) const;

  OperatorMatrix& operator+=(const OperatorMatrix& other);
  OperatorMatrix& operator-=(const OperatorMatrix& other);
  OperatorMatrix& operator*=(cplx s);

  friend OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b) { return a += b; }
  friend OperatorMatrix operator-(OperatorMatrix a, const OperatorMatrix& b) { return a -= b; }
  friend OperatorMatrix operator*(OperatorMatrix a, cplx s) { return a *= s; }
  friend OperatorMatrix operator*(cplx s, OperatorMatrix a) { return a *= s; }
  friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);

 private:
  BasisDescriptor basis_;
  SparseMatrix entries_;
};

class CompositeState {
 public:
  CompositeState() = default;
  CompositeState(BasisDescriptor basis, Vector amplitudes);

  /// |spins>|occupations> with spin_down[j] selecting |down> on spin j.
  static CompositeState basis_state(const BasisDescriptor& basis, std::span<const bool> spin_down,
                                    std::span<const int> occupations);
  /// Tensor product of per-spin 2-vectors and per-mode Fock vectors.
  static CompositeState product(const BasisDescriptor& basis, const std::vector<Vector>& spin_states,
                                const std::vector<Vector>& mode_states);

  const BasisDescriptor& basis() const { return basis_; }
  const Vector& amplitudes() const { return amplitudes_; }
  Vector& amplitudes() { return amplitudes_; }

  double norm() const { return amplitudes_.norm(); }
  CompositeState normalized() const;
  /// <this|other>
  cplx inner(const CompositeState& other) const;

 private:
  BasisDescriptor basis_;
  Vector amplitudes_;
};

namespace spin_states {
Vector up();
Vector down();
Vector plus();
Vector minus();
}  // namespace spin_states

/// Embed a local operator acting on tensor factor `factor` (spins first, then
/// modes) into the full space.
OperatorMatrix embed_local(const BasisDescriptor& basis, int factor, const DenseMatrix& local);

/// Same embedding computed by one Kronecker sweep over all factors. Used to
/// cross-check the index arithmetic of embed_local.
OperatorMatrix embed_local_kronecker(const BasisDescriptor& basis, int factor, const DenseMatrix& local);

DenseMatrix local_annihilation(int n_max);
DenseMatrix local_pauli(Axis axis);

OperatorMatrix annihilation_op(const BasisDescriptor& basis, int mode_index);
OperatorMatrix creation_op(const BasisDescriptor& basis, int mode_index);
OperatorMatrix number_op(const BasisDescriptor& basis, int mode_index);
/// exp(i pi n) on one mode.
OperatorMatrix parity_op(const BasisDescriptor& basis, int mode_index);
OperatorMatrix pauli_op(const BasisDescriptor& basis, int spin_index, Axis axis);

/// exp(alpha a^dagger - alpha* a) on one mode. Warns when |alpha|^2 > n_max/4
/// and throws DomainError when |alpha|^2 > n_max/2.
OperatorMatrix displacement_op(const BasisDescriptor& basis, int mode_index, cplx alpha);

/// exp[(nu/2)(a^dagger^2 - a^2)], normalised so that
/// S^dagger a S = a cosh(nu) + a^dagger sinh(nu). Same truncation policy as
/// displacement_op with sinh^2(nu) in place of |alpha|^2.
OperatorMatrix squeeze_op(const BasisDescriptor& basis, int mode_index, double nu);

/// <psi|O|psi>. The imaginary part is kept for Hermiticity checks.
cplx expectation(const CompositeState& state, const OperatorMatrix& obs);

/// Probability held in the top `levels` Fock states of `mode`.
double top_level_population(const CompositeState& state, int mode, int levels = 2);

/// Probability of the spin configuration `spin_down` (all modes traced out).
double spin_configuration_probability(const CompositeState& state, std::span<const bool> spin_down);

}  // namespace gradsense::hilbert
