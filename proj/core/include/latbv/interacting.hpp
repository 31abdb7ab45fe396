#pragma once

#include "latbv/brackets.hpp"

namespace latbv {

enum class QmeStatus { Unchecked, Pass, Fail };

// Interacting sector built on one model: S-matrix, its star inverse, and the
// state of the master-equation verification.
struct InteractionContext {
  const Model* model = nullptr;
  ProductContext prod;
  Poly V;
  Poly smatrix;      // exp_T(i V / hbar)
  Poly smatrix_inv;  // star inverse
  QmeStatus qme_status = QmeStatus::Unchecked;
  Rat qme_defect = 0;
};

InteractionContext make_interaction_context(const Model& m, PropagatorSet ps);
InteractionContext make_interaction_context(const Model& m, PropagatorSet ps, Poly v);

// relative S-matrix derivative: R_V(F) = S(V)^{*-1} * (S(V) .T F)
Poly bogoliubov(const InteractionContext& ictx, const Poly& f);

// same with interaction W (used by directional derivatives)
Poly bogoliubov_with(const InteractionContext& ictx, const Poly& w, const Poly& f);

// d/dlambda R_{V + lambda G}(F) at 0, by a nilpotent tag
Poly bogoliubov_derivative(const InteractionContext& ictx, const Poly& g, const Poly& f);

// order-by-order inverse of R_V
Poly bogoliubov_inverse(const InteractionContext& ictx, const Poly& f);

// n-th retarded product R_n(V,...,V;F), extracted from the coupling expansion
Poly retarded_coeffs(const InteractionContext& ictx, const Poly& f, int n);

// interacting star product F *_V G = R_V^{-1}(R_V F * R_V G)
Poly star_v(const InteractionContext& ictx, const Poly& f, const Poly& g);

// anomaly of the master Ward identity, solved from
// {S,S0}_* = (i/hbar) S .T ({V,S0}_T + 1/2 {V,V}_T - i hbar anomaly)
Poly extract_anomaly(const InteractionContext& ictx);
Poly extract_anomaly_with(const InteractionContext& ictx, const Poly& w);

// interacting BV Laplacian: tag-linear part of the anomaly at V + tag X
Poly laplacian_v(const InteractionContext& ictx, const Poly& x);

// two-factor extension formula for the interacting Laplacian on a T-product
Poly laplacian_v_product_form(const InteractionContext& ictx, const Poly& x, const Poly& y);

// quantum BV operator; computes the defining composite and the closed form
// {X, S0+V}_T - i hbar Laplacian_V(X), asserts equality, returns the closed
// form (QMENotVerified unless the master equation has been checked)
Poly quantum_bv(const InteractionContext& ictx, const Poly& x);

CheckRecord check_glz(const InteractionContext& ictx, const Poly& f, const Poly& g,
                      const std::string& tag);
CheckRecord check_retarded_support(const InteractionContext& ictx, const Poly& f);
CheckRecord check_anomaly_oracle(const InteractionContext& ictx);
CheckRecord check_anomaly_integral(const InteractionContext& ictx);
CheckRecord check_qme(InteractionContext& ictx);
CheckRecord check_quantum_bv(const InteractionContext& ictx, const Poly& x);
CheckRecord check_intertwining(const InteractionContext& ictx, const Poly& x);
CheckRecord check_laplacian_product(const InteractionContext& ictx, const Poly& x, const Poly& y);

// master equation for (S0, Vtilde + theta0) versus (S0 + theta0, Vtilde);
// asserts exact equality of the two defects
CheckRecord check_free_theory_change(const Model& m, const PropagatorSet& ps, const Poly& vtilde);

// restrict to monomials supported in the identity slab for the given order
Poly bulk_restrict(const Model& m, const Poly& p, int order);
bool slab_gen(const Model& m, GenId g, int order);

}  // namespace latbv
