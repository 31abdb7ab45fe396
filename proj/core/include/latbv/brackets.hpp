#pragma once

#include "latbv/deform.hpp"

namespace latbv {

enum class BracketKind { Pointwise, TimeOrdered, Star };

// classical Poisson structure from the causal propagator:
// sum (d^r F) causal (d^l G) over field directions
Poly peierls(const Poly& f, const Poly& g, const ProductContext& ctx);

// Schouten-type pairing of fields with antifields; the product between the
// derivative factors is pointwise, time-ordered or star
Poly antibracket(const Poly& f, const Poly& g, BracketKind kind, const ProductContext* ctx = nullptr);

// second-order field/antifield coincidence operator (non-renormalized)
Poly bv_laplacian(const Poly& f);

// action of the free symmetry vector field: sum (K phi)^a d^l_a F
Poly gamma0_apply(const Poly& f, const Model& m);

enum class BvPart { Full, Gamma, Delta };

// full differential {., S_ext} split by the antifield-count change of each
// output term
Poly bv_differential(const Poly& f, const Model& m, BvPart part);

// canonical transformation shifting antifields by derivatives of the gauge
// fixing fermion (gh = -1)
Poly gauge_fix(const Poly& f, const Poly& psi);

// defect norms of {theta0,S0}, {theta0,theta0} and the full classical master
// equation of S0 + theta0 + V_classical
std::vector<CheckRecord> check_cme(const Model& m);

// classical (lambda^0 hbar^0 tagless) part of the interaction
Poly classical_part(const Poly& v);

}  // namespace latbv
