#include "latbv/interacting.hpp"

#include <algorithm>

namespace latbv {

namespace {

Poly poly_tag_part(const Poly& p, int idx) {
  Poly out(p.table(), p.window());
  for (const auto& [m, c] : p.terms()) out.add_term(m, c.tag_part(idx));
  return out;
}

Poly tagged(const Poly& p, int idx) {
  Coeff unit = Coeff::monomial(p.window(), Scalar(1), 0, 0, idx == 0 ? 1 : 0, idx == 1 ? 1 : 0);
  Poly out = p;
  out.scale(unit);
  return out;
}

Coeff ihbar_unit(const Window& w) { return Coeff::monomial(w, Scalar::I(), 0, 1); }

}  // namespace

bool slab_gen(const Model& m, GenId g, int order) {
  const GenInfo& gi = m.tab->info(g);
  if (gi.cell >= m.lat->n_cells()) return true;  // formal parameter generators
  int lo = std::max(m.margin + m.ramp, m.stencil_radius * (1 + order));
  int hi = m.lat->nt() - 1 - lo;
  const Cell& c = m.lat->cell(gi.cell);
  int t1 = (c.type == CellType::TEdge || c.type == CellType::Plaq) ? c.t + 1 : c.t;
  return c.t >= lo && t1 <= hi;
}

Poly bulk_restrict(const Model& m, const Poly& p, int order) {
  Poly out(p.table(), p.window());
  for (const auto& [mono, c] : p.terms()) {
    bool keep = true;
    for (GenId g : mono.g)
      if (!slab_gen(m, g, order)) {
        keep = false;
        break;
      }
    if (keep) out.add_term(mono, c);
  }
  return out;
}

InteractionContext make_interaction_context(const Model& m, PropagatorSet ps) {
  return make_interaction_context(m, std::move(ps), m.V);
}

InteractionContext make_interaction_context(const Model& m, PropagatorSet ps, Poly v) {
  InteractionContext ictx;
  ictx.model = &m;
  ictx.prod = ProductContext(m, std::move(ps));
  ictx.V = std::move(v);
  ictx.smatrix = exp_T(ictx.V, ictx.prod);
  ictx.smatrix_inv = star_inverse(ictx.smatrix, ictx.prod);
  return ictx;
}

Poly bogoliubov(const InteractionContext& ictx, const Poly& f) {
  return star(ictx.smatrix_inv, tprod(ictx.smatrix, f, ictx.prod), ictx.prod);
}

Poly bogoliubov_with(const InteractionContext& ictx, const Poly& w, const Poly& f) {
  Poly s = exp_T(w, ictx.prod);
  Poly sinv = star_inverse(s, ictx.prod);
  return star(sinv, tprod(s, f, ictx.prod), ictx.prod);
}

Poly bogoliubov_derivative(const InteractionContext& ictx, const Poly& g, const Poly& f) {
  Poly w = ictx.V + tagged(g, 0);
  return poly_tag_part(bogoliubov_with(ictx, w, f), 0);
}

Poly bogoliubov_inverse(const InteractionContext& ictx, const Poly& f) {
  const Window& w = f.window();
  int rounds = w.lambda_max + w.tag_max0 + w.tag_max1 + 1;
  Poly x = f;
  for (int k = 0; k < rounds; ++k) {
    Poly r = bogoliubov(ictx, x);
    x = f - (r - x);
  }
  return x;
}

Poly retarded_coeffs(const InteractionContext& ictx, const Poly& f, int n) {
  if (n > f.window().lambda_max) fail(Err::WindowMismatch, "retarded order beyond truncation");
  Poly r = bogoliubov(ictx, f);
  // R_V(F) = sum (i^n / hbar^n n!) Rn; peel off the weight of order n
  Scalar inv_i_pow(1);
  for (int k = 0; k < n; ++k) inv_i_pow *= Scalar(Rat(0), Rat(-1));
  Rat fact = 1;
  for (int k = 2; k <= n; ++k) fact *= k;
  Poly out(f.table(), f.window());
  for (const auto& [mono, c] : r.terms()) {
    Coeff nc(f.window());
    for (const auto& [e, s] : c.terms()) {
      if (e.lam != n) continue;
      SeriesExp ne{0, static_cast<std::int16_t>(e.hbar + n), e.tag0, e.tag1};
      nc.add_term(ne, s * inv_i_pow * Scalar(fact));
    }
    out.add_term(mono, nc);
  }
  return out;
}

Poly star_v(const InteractionContext& ictx, const Poly& f, const Poly& g) {
  return bogoliubov_inverse(ictx,
                            star(bogoliubov(ictx, f), bogoliubov(ictx, g), ictx.prod));
}

Poly extract_anomaly_with(const InteractionContext& ictx, const Poly& w) {
  const Model& m = *ictx.model;
  Poly s = exp_T(w, ictx.prod);
  Poly s_neg = exp_T(-w, ictx.prod);
  Poly lhs = tprod(s_neg, antibracket(s, m.S0, BracketKind::Star, &ictx.prod), ictx.prod);
  Poly br = antibracket(w, m.S0, BracketKind::TimeOrdered, &ictx.prod);
  Poly ww = antibracket(w, w, BracketKind::TimeOrdered, &ictx.prod);
  ww.scale(Scalar(Rat(1, 2)));
  br += ww;
  // lhs = (i/hbar)(br - i hbar anomaly)  =>  anomaly = (br - (hbar/i) lhs)/(i hbar)
  Poly scaled(lhs.table(), lhs.window());
  for (const auto& [mono, c] : lhs.terms()) scaled.add_term(mono, c.shifted(0, 1, -Scalar::I()));
  Poly num = br - scaled;
  Poly out(num.table(), num.window());
  for (const auto& [mono, c] : num.terms())
    out.add_term(mono, c.shifted(0, -1, -Scalar::I()));
  return out;
}

Poly extract_anomaly(const InteractionContext& ictx) { return extract_anomaly_with(ictx, ictx.V); }

Poly laplacian_v(const InteractionContext& ictx, const Poly& x) {
  Poly w = ictx.V + tagged(x, 0);
  return poly_tag_part(extract_anomaly_with(ictx, w), 0);
}

Poly laplacian_v_product_form(const InteractionContext& ictx, const Poly& x, const Poly& y) {
  Poly t = tprod(laplacian_v(ictx, x), y, ictx.prod);
  t += tprod(x, laplacian_v(ictx, y), ictx.prod);
  t += antibracket(x, y, BracketKind::TimeOrdered, &ictx.prod);
  Poly w = ictx.V + tagged(x, 0) + tagged(y, 1);
  Poly dd = poly_tag_part(poly_tag_part(extract_anomaly_with(ictx, w), 0), 1);
  dd.scale(ihbar_unit(x.window()));
  t -= dd;  // - i hbar d^2/dt0 dt1 anomaly
  return t;
}

Poly quantum_bv(const InteractionContext& ictx, const Poly& x) {
  if (ictx.qme_status != QmeStatus::Pass)
    fail(Err::QMENotVerified, "quantum BV operator requires a verified master equation");
  const Model& m = *ictx.model;
  Poly s_neg = exp_T(-ictx.V, ictx.prod);
  Poly defining = tprod(
      s_neg,
      antibracket(tprod(ictx.smatrix, x, ictx.prod), m.S0, BracketKind::Star, &ictx.prod),
      ictx.prod);
  Poly closed = antibracket(x, m.S0 + ictx.V, BracketKind::TimeOrdered, &ictx.prod);
  Poly lap = laplacian_v(ictx, x);
  lap.scale(ihbar_unit(x.window()));
  closed -= lap;
  Poly diff = bulk_restrict(m, defining - closed, m.win.lambda_max);
  if (!diff.is_zero())
    fail(Err::HypothesisFailed, "quantum BV operator: defining composite differs from closed form");
  return closed;
}

CheckRecord check_glz(const InteractionContext& ictx, const Poly& f, const Poly& g,
                      const std::string& tag) {
  CheckRecord rec;
  rec.id = "glz_" + tag;
  rec.anchor = "[R F, R G]_* = i hbar d/dl (R_{V+lG}F - R_{V+lF}G)";
  Poly lhs = star_commutator(bogoliubov(ictx, f), bogoliubov(ictx, g), ictx.prod);
  Poly rhs = bogoliubov_derivative(ictx, g, f) - bogoliubov_derivative(ictx, f, g);
  rhs.scale(ihbar_unit(f.window()));
  Rat d = bulk_restrict(*ictx.model, lhs - rhs, ictx.model->win.lambda_max).norm1();
  rec.defect = rat_str(d);
  rec.status = d == 0 ? "PASS" : "FAIL";
  rec.lambda_max = ictx.model->win.lambda_max;
  return rec;
}

CheckRecord check_retarded_support(const InteractionContext& ictx, const Poly& f) {
  CheckRecord rec;
  rec.id = "retarded_support";
  rec.anchor = "retarded products vanish for insertions outside the causal past";
  const Model& m = *ictx.model;
  std::vector<GenId> fgens;
  for (const auto& [mono, c] : f.terms())
    for (GenId g : mono.g) fgens.push_back(g);
  int tested = 0;
  Rat worst = 0;
  for (const auto& [mono, c] : ictx.V.terms()) {
    bool inside = false;
    for (GenId vg : mono.g)
      for (GenId fg : fgens)
        if (in_forward_cone(m, fg, vg)) inside = true;
    if (inside) continue;
    Poly piece = Poly::mono(ictx.V.table(), ictx.V.window(), mono, c);
    Poly d = bogoliubov_derivative(ictx, piece, f);
    // subtract the zeroth retarded term (no V insertions): tag part of F is 0
    Rat n = d.norm1();
    if (n > worst) worst = n;
    ++tested;
  }
  rec.defect = rat_str(worst);
  rec.note = std::to_string(tested) + " insertion pieces outside the cone";
  rec.status = worst == 0 ? "PASS" : "FAIL";
  return rec;
}

// sign fixed once by the development-time derivation of the lattice anomaly
constexpr int kAnomalySign = 1;

CheckRecord check_anomaly_oracle(const InteractionContext& ictx) {
  CheckRecord rec;
  rec.id = "anomaly_oracle";
  rec.anchor = "solved anomaly equals the non-renormalized Laplacian of V";
  Poly a = extract_anomaly(ictx);
  Poly oracle = bv_laplacian(ictx.V);
  oracle.scale(Scalar(kAnomalySign));
  Rat d = bulk_restrict(*ictx.model, a - oracle, ictx.model->win.lambda_max).norm1();
  rec.defect = rat_str(d);
  rec.status = d == 0 ? "PASS" : "FAIL";
  return rec;
}

CheckRecord check_anomaly_integral(const InteractionContext& ictx) {
  CheckRecord rec;
  rec.id = "anomaly_integral";
  rec.anchor = "anomaly(V) = integral_0^1 Laplacian_{sV}(V) ds by order weights";
  Poly a = extract_anomaly(ictx);
  Poly l = laplacian_v(ictx, ictx.V);
  Poly scaled(l.table(), l.window());
  for (const auto& [mono, c] : l.terms()) {
    Coeff nc(l.window());
    for (const auto& [e, s] : c.terms()) {
      if (e.lam < 1) continue;  // every term carries the argument insertion
      nc.add_term(e, s * Scalar(Rat(1, e.lam)));
    }
    scaled.add_term(mono, nc);
  }
  Rat d = bulk_restrict(*ictx.model, a - scaled, ictx.model->win.lambda_max).norm1();
  rec.defect = rat_str(d);
  rec.status = d == 0 ? "PASS" : "FAIL";
  return rec;
}

CheckRecord check_qme(InteractionContext& ictx) {
  CheckRecord rec;
  rec.id = "qme";
  rec.anchor = "exp(-iV).T {exp(iV), S0}_* = 0";
  const Model& m = *ictx.model;
  Poly s_neg = exp_T(-ictx.V, ictx.prod);
  Poly defect_poly =
      tprod(s_neg, antibracket(ictx.smatrix, m.S0, BracketKind::Star, &ictx.prod), ictx.prod);
  Rat d = bulk_restrict(m, defect_poly, m.win.lambda_max).norm1();
  // equivalent classical form for the note
  Poly closed = antibracket(m.S0 + ictx.V, m.S0 + ictx.V, BracketKind::Pointwise);
  closed.scale(Scalar(Rat(1, 2)));
  Poly an = extract_anomaly(ictx);
  an.scale(ihbar_unit(m.win));
  closed -= an;
  Rat d2 = bulk_restrict(m, closed, m.win.lambda_max).norm1();
  rec.note = "classical-form defect " + rat_str(d2);
  rec.defect = rat_str(d);
  rec.status = d == 0 ? "PASS" : "FAIL";
  ictx.qme_status = d == 0 ? QmeStatus::Pass : QmeStatus::Fail;
  ictx.qme_defect = d;
  rec.lambda_max = m.win.lambda_max;
  return rec;
}

CheckRecord check_quantum_bv(const InteractionContext& ictx, const Poly& x) {
  CheckRecord rec;
  rec.id = "quantum_bv_closed_form";
  rec.anchor = "defining composite equals {X,S0+V}_T - i hbar Laplacian_V(X)";
  try {
    Poly s = quantum_bv(ictx, x);
    (void)s;
    rec.defect = "0";
    rec.status = "PASS";
  } catch (const Error& e) {
    rec.status = "FAIL";
    rec.note = e.what();
    rec.defect = "nonzero";
  }
  return rec;
}

CheckRecord check_intertwining(const InteractionContext& ictx, const Poly& x) {
  CheckRecord rec;
  rec.id = "intertwining";
  rec.anchor = "{., S0}_* after R_V equals R_V after the quantum BV operator";
  if (ictx.qme_status != QmeStatus::Pass) {
    rec.status = "SKIPPED";
    rec.note = "master equation not verified";
    return rec;
  }
  const Model& m = *ictx.model;
  Poly lhs = antibracket(bogoliubov(ictx, x), m.S0, BracketKind::Star, &ictx.prod);
  Poly rhs = bogoliubov(ictx, quantum_bv(ictx, x));
  Rat d = bulk_restrict(m, lhs - rhs, m.win.lambda_max).norm1();
  rec.defect = rat_str(d);
  rec.status = d == 0 ? "PASS" : "FAIL";
  return rec;
}

CheckRecord check_laplacian_product(const InteractionContext& ictx, const Poly& x, const Poly& y) {
  CheckRecord rec;
  rec.id = "laplacian_product_extension";
  rec.anchor = "interacting Laplacian of a T-product via the two-factor formula";
  Poly direct = laplacian_v(ictx, tprod(x, y, ictx.prod));
  Poly formula = laplacian_v_product_form(ictx, x, y);
  Rat d = bulk_restrict(*ictx.model, direct - formula, ictx.model->win.lambda_max).norm1();
  rec.defect = rat_str(d);
  rec.status = d == 0 ? "PASS" : "FAIL";
  return rec;
}

CheckRecord check_free_theory_change(const Model& m, const PropagatorSet& ps, const Poly& vtilde) {
  CheckRecord rec;
  rec.id = "change_free_theory";
  rec.anchor = "master-equation defect agrees between (S0, V+theta0) and (S0+theta0, V)";
  Coeff lam = Coeff::monomial(m.win, Scalar(1), 1, 0);
  Poly theta_tagged = m.theta0;
  theta_tagged.scale(lam);

  InteractionContext ith = make_interaction_context(m, ps, theta_tagged);
  Poly ath = extract_anomaly(ith);
  if (!bulk_restrict(m, ath, m.win.lambda_max).is_zero()) {
    rec.status = "FAIL";
    rec.note = "free master equation for theta0 fails";
    rec.defect = rat_str(ath.norm1());
    return rec;
  }

  InteractionContext i1 = make_interaction_context(m, ps, vtilde + theta_tagged);
  Poly d1 = tprod(exp_T(-i1.V, i1.prod),
                  antibracket(i1.smatrix, m.S0, BracketKind::Star, &i1.prod), i1.prod);

  InteractionContext i2 = make_interaction_context(m, ps, vtilde);
  Poly free_action = m.S0 + theta_tagged;
  Poly d2 = tprod(exp_T(-i2.V, i2.prod),
                  antibracket(i2.smatrix, free_action, BracketKind::Star, &i2.prod), i2.prod);

  Poly r1 = bulk_restrict(m, d1, m.win.lambda_max);
  Poly r2 = bulk_restrict(m, d2, m.win.lambda_max);
  Rat d = (r1 - r2).norm1();
  rec.defect = rat_str(d);
  rec.note = "defects " + rat_str(r1.norm1()) + " and " + rat_str(r2.norm1());
  rec.status = d == 0 ? "PASS" : "FAIL";
  rec.lambda_max = m.win.lambda_max;
  return rec;
}

}  // namespace latbv
