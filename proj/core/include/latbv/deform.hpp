#pragma once

#include <unordered_map>

#include "latbv/green.hpp"

namespace latbv {

// hash-indexed kernel view for the contraction inner loop
class FlatKernel {
 public:
  FlatKernel() = default;
  FlatKernel(const Kernel& k, std::size_t n_gens);

  const Scalar* get(GenId a, GenId b) const {
    if (!row_used_.empty() && !row_used_[a]) return nullptr;
    auto it = m_.find((static_cast<std::uint64_t>(a) << 32) | b);
    return it == m_.end() ? nullptr : &it->second;
  }

 private:
  std::unordered_map<std::uint64_t, Scalar> m_;
  std::vector<char> row_used_;
};

// Deformation context: which two-point kernels drive the star and
// time-ordered contractions.
struct ProductContext {
  GenTablePtr tab;
  Window win;
  PropagatorSet props;
  FlatKernel star_kernel;   // omega
  FlatKernel tprod_kernel;  // i dirac + H
  FlatKernel causal_kernel;

  ProductContext() = default;
  ProductContext(const Model& m, PropagatorSet ps);
};

// m o exp(i hbar Gamma'_K)(F (x) G): graded Wick contraction of right
// derivatives of F against left derivatives of G through the kernel.
Poly contract_product(const Poly& f, const Poly& g, const FlatKernel& k);

// single contraction without the i hbar weight: sum (d^r F) K (d^l G)
Poly contract_once(const Poly& f, const Poly& g, const FlatKernel& k);

inline Poly star(const Poly& f, const Poly& g, const ProductContext& ctx) {
  return contract_product(f, g, ctx.star_kernel);
}
inline Poly tprod(const Poly& f, const Poly& g, const ProductContext& ctx) {
  return contract_product(f, g, ctx.tprod_kernel);
}

// graded commutator [F,G]_* = F*G - (-1)^{|F||G|} G*F (parity-homogeneous
// inputs; mixed inputs are split termwise by parity)
Poly star_commutator(const Poly& f, const Poly& g, const ProductContext& ctx);

// alpha_H = exp((hbar/2) Gamma_H), Gamma_H = sum H[a][b] d^l_a d^r_b
Poly gamma_transform(const Poly& f, const Kernel& h);

// time-ordered exponential of an interaction of insertion order >= 1
Poly exp_T(const Poly& v, const ProductContext& ctx);

// inverse w.r.t. the star product by geometric series in the non-unit part
Poly star_inverse(const Poly& a, const ProductContext& ctx);

// T-ordering reduces to the star product on time-ordered supports
CheckRecord check_causal_factorization(const Model& m, const ProductContext& ctx, const Poly& f,
                                       const Poly& g);

// Leibniz rule of the free symmetry differential over the star product on a
// panel of randomized pairs
CheckRecord check_gamma0_derivation(const Model& m, const ProductContext& ctx, int pairs,
                                    std::uint64_t seed);

}  // namespace latbv
