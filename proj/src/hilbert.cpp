#include "gradsense/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "gradsense/diagnostics.hpp"

namespace gradsense::hilbert {

namespace {

int factor_count(const BasisDescriptor& basis) { return basis.num_spins() + basis.num_modes(); }

int factor_dimension(const BasisDescriptor& basis, int factor) {
  return factor < basis.num_spins() ? 2 : basis.fock_dims()[factor - basis.num_spins()];
}

void check_mode(const BasisDescriptor& basis, int mode_index) {
  if (mode_index < 0 || mode_index >= basis.num_modes()) {
    throw std::out_of_range("mode index " + std::to_string(mode_index) + " out of range (" +
                            std::to_string(basis.num_modes()) + " modes)");
  }
}

void check_spin(const BasisDescriptor& basis, int spin_index) {
  if (spin_index < 0 || spin_index >= basis.num_spins()) {
    throw std::out_of_range("spin index " + std::to_string(spin_index) + " out of range (" +
                            std::to_string(basis.num_spins()) + " spins)");
  }
}

void check_truncation(double mean_occupation, int n_max, const char* what) {
  if (mean_occupation > 0.5 * n_max) {
    std::ostringstream os;
    os << what << ": mean occupation " << mean_occupation << " exceeds n_max/2 = " << 0.5 * n_max
       << "; increase the truncation";
    throw DomainError(os.str());
  }
  if (mean_occupation > 0.25 * n_max) {
    std::ostringstream os;
    os << what << ": mean occupation " << mean_occupation << " exceeds n_max/4 = " << 0.25 * n_max;
    diagnostics::warn(os.str());
  }
}

}  // namespace

BasisDescriptor::BasisDescriptor(int num_spins, std::vector<int> fock_dims, std::vector<std::string> mode_labels)
    : num_spins_(num_spins), fock_dims_(std::move(fock_dims)), mode_labels_(std::move(mode_labels)) {
  if (num_spins_ < 0 || num_spins_ > 20) throw std::invalid_argument("num_spins must be in [0, 20]");
  for (int d : fock_dims_) {
    if (d < 2) throw std::invalid_argument("every Fock dimension must be >= 2");
  }
  if (mode_labels_.empty()) {
    for (std::size_t k = 0; k < fock_dims_.size(); ++k) mode_labels_.push_back("mode-" + std::to_string(k + 1));
  }
  if (mode_labels_.size() != fock_dims_.size()) {
    throw std::invalid_argument("mode_labels and fock_dims differ in length");
  }
}

std::size_t BasisDescriptor::mode_dimension() const {
  std::size_t d = 1;
  for (int n : fock_dims_) d *= static_cast<std::size_t>(n);
  return d;
}

std::size_t BasisDescriptor::index(std::span<const bool> spin_down, std::span<const int> occupations) const {
  if (static_cast<int>(spin_down.size()) != num_spins_ || static_cast<int>(occupations.size()) != num_modes()) {
    throw std::invalid_argument("basis index: wrong number of spin or mode labels");
  }
  std::size_t s = 0;
  for (bool down : spin_down) s = 2 * s + (down ? 1 : 0);
  std::size_t m = 0;
  for (int k = 0; k < num_modes(); ++k) {
    if (occupations[k] < 0 || occupations[k] >= fock_dims_[k]) throw std::out_of_range("occupation out of range");
    m = m * static_cast<std::size_t>(fock_dims_[k]) + static_cast<std::size_t>(occupations[k]);
  }
  return s * mode_dimension() + m;
}

int BasisDescriptor::occupation(std::size_t flat_index, int mode) const {
  std::size_t m = flat_index % mode_dimension();
  for (int k = num_modes() - 1; k > mode; --k) m /= static_cast<std::size_t>(fock_dims_[k]);
  return static_cast<int>(m % static_cast<std::size_t>(fock_dims_[mode]));
}

bool BasisDescriptor::spin_down(std::size_t flat_index, int spin) const {
  const std::size_t s = flat_index / mode_dimension();
  return ((s >> (num_spins_ - 1 - spin)) & 1U) != 0;
}

BasisDescriptor BasisDescriptor::with_truncation(int n_max) const {
  return BasisDescriptor(num_spins_, std::vector<int>(fock_dims_.size(), n_max), mode_labels_);
}

void require_same_basis(const BasisDescriptor& a, const BasisDescriptor& b) {
  if (!(a == b)) throw std::invalid_argument("basis mismatch between operands");
}

// --- OperatorMatrix ---------------------------------------------------------

OperatorMatrix::OperatorMatrix(BasisDescriptor basis, SparseMatrix entries)
    : basis_(std::move(basis)), entries_(std::move(entries)) {
  const auto d = static_cast<Eigen::Index>(basis_.dimension());
  if (entries_.rows() != d || entries_.cols() != d) throw std::invalid_argument("operator shape does not match basis");
  entries_.makeCompressed();
}

OperatorMatrix OperatorMatrix::zero(const BasisDescriptor& basis) {
  const auto d = static_cast<Eigen::Index>(basis.dimension());
  return OperatorMatrix(basis, SparseMatrix(d, d));
}

OperatorMatrix OperatorMatrix::identity(const BasisDescriptor& basis) {
  const auto d = static_cast<Eigen::Index>(basis.dimension());
  SparseMatrix id(d, d);
  id.setIdentity();
  return OperatorMatrix(basis, std::move(id));
}

OperatorMatrix OperatorMatrix::adjoint() const { return OperatorMatrix(basis_, SparseMatrix(entries_.adjoint())); }

double OperatorMatrix::hermiticity_defect() const {
  SparseMatrix diff = entries_ - SparseMatrix(entries_.adjoint());
  double worst = 0.0;
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst;
}

Vector OperatorMatrix::apply(const Vector& v) const {
  if (v.size() != entries_.cols()) throw std::invalid_argument("vector length does not match operator");
  return entries_ * v;
}

CompositeState OperatorMatrix::apply(const CompositeState& psi) const {
  require_same_basis(basis_, psi.basis());
  return CompositeState(basis_, entries_ * psi.amplitudes());
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& other) {
  require_same_basis(basis_, other.basis_);
  entries_ += other.entries_;
  entries_.makeCompressed();
  return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& other) {
  require_same_basis(basis_, other.basis_);
  entries_ -= other.entries_;
  entries_.makeCompressed();
  return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(cplx s) {
  entries_ *= s;
  return *this;
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_basis(a.basis(), b.basis());
  return OperatorMatrix(a.basis(), SparseMatrix(a.matrix() * b.matrix()));
}

// --- CompositeState ---------------------------------------------------------

CompositeState::CompositeState(BasisDescriptor basis, Vector amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != basis_.dimension()) {
    throw std::invalid_argument("amplitude vector length does not match basis dimension");
  }
}

CompositeState CompositeState::basis_state(const BasisDescriptor& basis, std::span<const bool> spin_down,
                                           std::span<const int> occupations) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(basis.dimension()));
  v(static_cast<Eigen::Index>(basis.index(spin_down, occupations))) = 1.0;
  return CompositeState(basis, std::move(v));
}

CompositeState CompositeState::product(const BasisDescriptor& basis, const std::vector<Vector>& spin_states,
                                       const std::vector<Vector>& mode_states) {
  if (static_cast<int>(spin_states.size()) != basis.num_spins() ||
      static_cast<int>(mode_states.size()) != basis.num_modes()) {
    throw std::invalid_argument("product state: wrong number of factors");
  }
  Vector v = Vector::Ones(1);
  auto append = [&v](const Vector& f) {
    Vector out(v.size() * f.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out.segment(i * f.size(), f.size()) = v(i) * f;
    v = std::move(out);
  };
  for (const auto& s : spin_states) {
    if (s.size() != 2) throw std::invalid_argument("spin factor must have length 2");
    append(s);
  }
  for (int k = 0; k < basis.num_modes(); ++k) {
    if (mode_states[k].size() != basis.fock_dims()[k]) throw std::invalid_argument("mode factor length mismatch");
    append(mode_states[k]);
  }
  return CompositeState(basis, std::move(v));
}

CompositeState CompositeState::normalized() const {
  const double n = norm();
  if (n == 0.0) throw std::invalid_argument("cannot normalise the zero vector");
  return CompositeState(basis_, amplitudes_ / n);
}

cplx CompositeState::inner(const CompositeState& other) const {
  require_same_basis(basis_, other.basis_);
  return amplitudes_.dot(other.amplitudes_);
}

namespace spin_states {
Vector up() { return Vector::Unit(2, 0); }
Vector down() { return Vector::Unit(2, 1); }
Vector plus() { return (up() + down()) / std::sqrt(2.0); }
Vector minus() { return (up() - down()) / std::sqrt(2.0); }
}  // namespace spin_states

// --- local operators and embedding ------------------------------------------

OperatorMatrix embed_local(const BasisDescriptor& basis, int factor, const DenseMatrix& local) {
  if (factor < 0 || factor >= factor_count(basis)) throw std::out_of_range("tensor factor out of range");
  const std::size_t dk = static_cast<std::size_t>(factor_dimension(basis, factor));
  if (static_cast<std::size_t>(local.rows()) != dk || local.rows() != local.cols()) {
    throw std::invalid_argument("local operator has the wrong shape for its factor");
  }
  std::size_t before = 1;
  std::size_t after = 1;
  for (int f = 0; f < factor; ++f) before *= static_cast<std::size_t>(factor_dimension(basis, f));
  for (int f = factor + 1; f < factor_count(basis); ++f) after *= static_cast<std::size_t>(factor_dimension(basis, f));

  std::vector<Eigen::Triplet<cplx>> triplets;
  for (std::size_t r = 0; r < dk; ++r) {
    for (std::size_t c = 0; c < dk; ++c) {
      const cplx v = local(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      if (v == cplx{}) continue;
      for (std::size_t b = 0; b < before; ++b) {
        for (std::size_t a = 0; a < after; ++a) {
          triplets.emplace_back(static_cast<int>((b * dk + r) * after + a), static_cast<int>((b * dk + c) * after + a), v);
        }
      }
    }
  }
  const auto d = static_cast<Eigen::Index>(basis.dimension());
  SparseMatrix m(d, d);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return OperatorMatrix(basis, std::move(m));
}

OperatorMatrix embed_local_kronecker(const BasisDescriptor& basis, int factor, const DenseMatrix& local) {
  if (factor < 0 || factor >= factor_count(basis)) throw std::out_of_range("tensor factor out of range");
  Eigen::SparseMatrix<cplx> acc(1, 1);
  acc.insert(0, 0) = 1.0;
  for (int f = 0; f < factor_count(basis); ++f) {
    Eigen::SparseMatrix<cplx> piece;
    if (f == factor) {
      piece = local.sparseView();
    } else {
      const int d = factor_dimension(basis, f);
      piece.resize(d, d);
      piece.setIdentity();
    }
    Eigen::SparseMatrix<cplx> next = Eigen::kroneckerProduct(acc, piece);
    acc = std::move(next);
  }
  return OperatorMatrix(basis, SparseMatrix(acc));
}

DenseMatrix local_annihilation(int n_max) {
  DenseMatrix a = DenseMatrix::Zero(n_max, n_max);
  for (int n = 1; n < n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

DenseMatrix local_pauli(Axis axis) {
  DenseMatrix s = DenseMatrix::Zero(2, 2);
  const cplx i{0.0, 1.0};
  switch (axis) {
    case Axis::x:
      s(0, 1) = 1.0;
      s(1, 0) = 1.0;
      break;
    case Axis::y:
      s(0, 1) = -i;
      s(1, 0) = i;
      break;
    case Axis::z:
      s(0, 0) = 1.0;
      s(1, 1) = -1.0;
      break;
  }
  return s;
}

OperatorMatrix annihilation_op(const BasisDescriptor& basis, int mode_index) {
  check_mode(basis, mode_index);
  return embed_local(basis, basis.num_spins() + mode_index, local_annihilation(basis.fock_dims()[mode_index]));
}

OperatorMatrix creation_op(const BasisDescriptor& basis, int mode_index) {
  check_mode(basis, mode_index);
  return embed_local(basis, basis.num_spins() + mode_index,
                     local_annihilation(basis.fock_dims()[mode_index]).adjoint());
}

OperatorMatrix number_op(const BasisDescriptor& basis, int mode_index) {
  check_mode(basis, mode_index);
  const int n_max = basis.fock_dims()[mode_index];
  DenseMatrix n = DenseMatrix::Zero(n_max, n_max);
  for (int k = 0; k < n_max; ++k) n(k, k) = static_cast<double>(k);
  return embed_local(basis, basis.num_spins() + mode_index, n);
}

OperatorMatrix parity_op(const BasisDescriptor& basis, int mode_index) {
  check_mode(basis, mode_index);
  const int n_max = basis.fock_dims()[mode_index];
  DenseMatrix p = DenseMatrix::Zero(n_max, n_max);
  for (int k = 0; k < n_max; ++k) p(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
  return embed_local(basis, basis.num_spins() + mode_index, p);
}

OperatorMatrix pauli_op(const BasisDescriptor& basis, int spin_index, Axis axis) {
  check_spin(basis, spin_index);
  return embed_local(basis, spin_index, local_pauli(axis));
}

OperatorMatrix displacement_op(const BasisDescriptor& basis, int mode_index, cplx alpha) {
  check_mode(basis, mode_index);
  const int n_max = basis.fock_dims()[mode_index];
  check_truncation(std::norm(alpha), n_max, "displacement_op");
  const DenseMatrix a = local_annihilation(n_max);
  const DenseMatrix generator = alpha * a.adjoint() - std::conj(alpha) * a;
  return embed_local(basis, basis.num_spins() + mode_index, generator.exp());
}

OperatorMatrix squeeze_op(const BasisDescriptor& basis, int mode_index, double nu) {
  check_mode(basis, mode_index);
  const int n_max = basis.fock_dims()[mode_index];
  check_truncation(std::sinh(nu) * std::sinh(nu), n_max, "squeeze_op");
  const DenseMatrix a = local_annihilation(n_max);
  const DenseMatrix generator = (0.5 * nu) * (a.adjoint() * a.adjoint() - a * a);
  return embed_local(basis, basis.num_spins() + mode_index, generator.exp());
}

cplx expectation(const CompositeState& state, const OperatorMatrix& obs) {
  require_same_basis(state.basis(), obs.basis());
  return state.amplitudes().dot(obs.matrix() * state.amplitudes());
}

double top_level_population(const CompositeState& state, int mode, int levels) {
  const auto& basis = state.basis();
  check_mode(basis, mode);
  const int n_max = basis.fock_dims()[mode];
  double p = 0.0;
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    if (basis.occupation(i, mode) >= n_max - levels) p += std::norm(state.amplitudes()(static_cast<Eigen::Index>(i)));
  }
  return p;
}

double spin_configuration_probability(const CompositeState& state, std::span<const bool> spin_down) {
  const auto& basis = state.basis();
  if (static_cast<int>(spin_down.size()) != basis.num_spins()) throw std::invalid_argument("spin configuration length");
  std::size_t s = 0;
  for (bool d : spin_down) s = 2 * s + (d ? 1 : 0);
  const auto md = static_cast<Eigen::Index>(basis.mode_dimension());
  return state.amplitudes().segment(static_cast<Eigen::Index>(s) * md, md).squaredNorm();
}

}  // namespace gradsense::hilbert
