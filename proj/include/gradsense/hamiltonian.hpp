#pragma once

#include <functional>
#include <vector>

#include "gradsense/hilbert.hpp"

namespace gradsense {

/// H(t) = H_static + sum_k f_k(t) V_k with real scalar envelopes f_k.
class TimeDependentHamiltonian {
 public:
  using Envelope = std::function<double(double)>;

  explicit TimeDependentHamiltonian(hilbert::OperatorMatrix static_part);

  TimeDependentHamiltonian& add_static(const hilbert::OperatorMatrix& term);
  TimeDependentHamiltonian& add_modulated(const hilbert::OperatorMatrix& term, Envelope envelope);

  const hilbert::BasisDescriptor& basis() const { return static_part_.basis(); }
  bool is_static() const { return modulated_.empty(); }

  hilbert::SparseMatrix at(double t) const;
  /// H(t) v without assembling H(t).
  hilbert::Vector apply(double t, const hilbert::Vector& v) const;
  hilbert::OperatorMatrix operator_at(double t) const { return {basis(), at(t)}; }

 private:
  hilbert::OperatorMatrix static_part_;
  std::vector<std::pair<hilbert::OperatorMatrix, Envelope>> modulated_;
};

}  // namespace gradsense
