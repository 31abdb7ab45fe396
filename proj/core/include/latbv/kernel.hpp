#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>

#include "latbv/gens.hpp"
#include "latbv/rational.hpp"

namespace latbv {

// Two-point kernel over generator indices. Entries are kernel VALUES in the
// continuum normalization: compositions and contractions insert one measure
// factor per summed index, and the identity kernel is delta/mu.
class Kernel {
 public:
  Kernel() = default;
  explicit Kernel(GenTablePtr tab) : tab_(std::move(tab)) {}

  const GenTablePtr& table() const { return tab_; }
  bool is_zero() const { return e_.empty(); }
  std::size_t size() const { return e_.size(); }

  void set(GenId i, GenId j, const Scalar& v);
  void add(GenId i, GenId j, const Scalar& v);
  Scalar get(GenId i, GenId j) const;
  const std::map<std::pair<GenId, GenId>, Scalar>& entries() const { return e_; }

  Kernel& operator+=(const Kernel& o);
  Kernel& operator-=(const Kernel& o);
  friend Kernel operator+(Kernel a, const Kernel& b) { return a += b; }
  friend Kernel operator-(Kernel a, const Kernel& b) { return a -= b; }
  Kernel& scale(const Scalar& s);

  // (A o B)[i][k] = sum_j A[i][j] mu_j B[j][k]
  friend Kernel compose(const Kernel& a, const Kernel& b);

  // (i,j) -> (-1)^{|i||j|} [j][i]
  Kernel graded_transpose() const;
  // graded formal adjoint w.r.t. the signed multiplet duality (bilinear, no
  // conjugation)
  Kernel graded_adjoint() const;
  // plain conjugate transpose in the measure duality
  Kernel hermitian_transpose() const;

  Kernel restricted(const std::function<bool(GenId)>& keep) const;

  Rat norm1() const;
  Rat norm1_over(const std::function<bool(GenId, GenId)>& keep) const;

  std::string dump() const;  // `i j re im` lines, sorted

 private:
  GenTablePtr tab_;
  std::map<std::pair<GenId, GenId>, Scalar> e_;
};

Kernel identity_kernel(const GenTablePtr& tab, const std::function<bool(GenId)>& domain);

}  // namespace latbv
