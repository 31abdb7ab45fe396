#include "latbv/brst.hpp"

#include <algorithm>

namespace latbv {

Profile Profile::step(const Model& m, int first_one) {
  if (first_one <= m.window_lo() || first_one > m.window_hi())
    fail(Err::ProfileOutOfBulk, "step transition outside the cutoff window");
  Profile p;
  p.eta.assign(static_cast<std::size_t>(m.lat->nt()), Rat(0));
  for (int t = first_one; t < m.lat->nt(); ++t) p.eta[static_cast<std::size_t>(t)] = 1;
  return p;
}

Profile Profile::bump(const Model& m, int lo, int hi) {
  if (lo <= m.window_lo() || hi > m.window_hi() || lo > hi)
    fail(Err::ProfileOutOfBulk, "bump outside the cutoff window");
  Profile p;
  p.eta.assign(static_cast<std::size_t>(m.lat->nt()), Rat(0));
  for (int t = lo; t <= hi; ++t) p.eta[static_cast<std::size_t>(t)] = 1;
  return p;
}

SolutionSpace solution_space(const Model& m) {
  const GenTable& tab = *m.tab;
  const int t_seed = 2 * (m.window_lo() + 2);  // everything strictly below is data

  // rows: P rows that reach above the seam, plus trivial seed rows
  struct Eq {
    std::map<GenId, Scalar> lhs;
    std::map<GenId, Scalar> rhs;  // seed column -> value
    int max_time = 0;
  };
  std::map<GenId, Eq> prow;
  for (const auto& [ij, v] : m.P.entries()) {
    Eq& e = prow[ij.first];
    Scalar w = v * Scalar(tab.info(ij.second).mu);
    auto it = e.lhs.find(ij.second);
    if (it == e.lhs.end())
      e.lhs.emplace(ij.second, w);
    else
      it->second += w;
  }

  std::vector<GenId> seeds;
  std::vector<Eq> eqs;
  for (auto& [i, e] : prow) {
    e.max_time = -(1 << 20);
    for (const auto& [g, c] : e.lhs) e.max_time = std::max(e.max_time, tab.info(g).time2);
    if (e.max_time >= t_seed) eqs.push_back(e);
  }
  for (GenId g = 0; g < tab.size(); ++g) {
    const GenInfo& gi = tab.info(g);
    if (gi.kind != GenKind::Field || gi.cell >= m.lat->n_cells()) continue;
    if (gi.time2 >= 2 * m.window_lo() && gi.time2 < t_seed) {
      seeds.push_back(g);
      Eq e;
      e.lhs.emplace(g, Scalar(1));
      e.rhs.emplace(g, Scalar(1));
      e.max_time = gi.time2;
      eqs.push_back(std::move(e));
    }
  }

  // frontier elimination in time order (same scheme as the propagator solve)
  std::map<int, std::vector<std::size_t>> by_time;
  for (std::size_t i = 0; i < eqs.size(); ++i) by_time[eqs[i].max_time].push_back(i);
  std::map<GenId, std::map<GenId, Scalar>> solution;
  auto substitute = [&](Eq& e) {
    for (auto it = e.lhs.begin(); it != e.lhs.end();) {
      auto sit = solution.find(it->first);
      if (sit == solution.end()) {
        ++it;
        continue;
      }
      Scalar c = it->second;
      for (const auto& [s, v] : sit->second) {
        auto r = e.rhs.find(s);
        Scalar delta = c * v;
        if (r == e.rhs.end()) {
          if (!delta.is_zero()) e.rhs.emplace(s, -delta);
        } else {
          r->second -= delta;
          if (r->second.is_zero()) e.rhs.erase(r);
        }
      }
      it = e.lhs.erase(it);
    }
  };
  for (const auto& [t, ids] : by_time) {
    std::vector<Eq> block;
    for (std::size_t i : ids) {
      Eq e = eqs[i];
      substitute(e);
      block.push_back(std::move(e));
    }
    // latest-first pivoting with zero completion
    std::set<GenId> unknown_set;
    for (const Eq& e : block)
      for (const auto& [g, c] : e.lhs) unknown_set.insert(g);
    std::vector<GenId> unknowns(unknown_set.begin(), unknown_set.end());
    std::stable_sort(unknowns.begin(), unknowns.end(),
                     [&](GenId a, GenId b) { return tab.info(a).time2 > tab.info(b).time2; });
    std::vector<std::pair<GenId, Eq*>> pivots;
    for (GenId u : unknowns) {
      Eq* pivot = nullptr;
      for (Eq& e : block) {
        if (!e.lhs.count(u)) continue;
        bool used = false;
        for (auto& [pu, pe] : pivots) used |= (pe == &e);
        if (!used) {
          pivot = &e;
          break;
        }
      }
      if (!pivot) continue;
      Scalar inv = pivot->lhs[u].inverse();
      for (auto& [g, c] : pivot->lhs) c *= inv;
      for (auto& [s, c] : pivot->rhs) c *= inv;
      for (Eq& e : block) {
        if (&e == pivot) continue;
        auto it = e.lhs.find(u);
        if (it == e.lhs.end()) continue;
        Scalar c = it->second;
        for (const auto& [g, pc] : pivot->lhs) {
          auto rit = e.lhs.find(g);
          Scalar delta = c * pc;
          if (rit == e.lhs.end()) {
            if (!delta.is_zero()) e.lhs.emplace(g, -delta);
          } else {
            rit->second -= delta;
            if (rit->second.is_zero()) e.lhs.erase(rit);
          }
        }
        for (const auto& [s, pc] : pivot->rhs) {
          auto rit = e.rhs.find(s);
          Scalar delta = c * pc;
          if (rit == e.rhs.end()) {
            if (!delta.is_zero()) e.rhs.emplace(s, -delta);
          } else {
            rit->second -= delta;
            if (rit->second.is_zero()) e.rhs.erase(rit);
          }
        }
      }
      pivots.push_back({u, pivot});
    }
    for (const Eq& e : block)
      if (e.lhs.empty() && !e.rhs.empty())
        fail(Err::SingularLeadingBlock, "inconsistent block in solution march");
    std::set<GenId> pinned;
    for (auto& [u, pe] : pivots) pinned.insert(u);
    for (GenId u : unknowns)
      if (!pinned.count(u)) solution[u] = {};
    for (auto& [u, pe] : pivots) solution[u] = pe->rhs;
  }

  SolutionSpace out;
  // collect aux odd parameter generators reserved by the model builder
  for (GenId g = 0; g < tab.size(); ++g)
    if (tab.info(g).cell >= m.lat->n_cells() && tab.info(g).parity == 1) out.odd_params.push_back(g);

  std::size_t odd_used = 0;
  for (GenId s : seeds) {
    std::map<GenId, Scalar> col;
    for (const auto& [u, vals] : solution) {
      auto it = vals.find(s);
      if (it != vals.end() && !it->second.is_zero()) col.emplace(u, it->second);
    }
    if (col.empty()) continue;
    if (tab.info(s).parity == 0) {
      out.even_basis.push_back(std::move(col));
    } else {
      if (odd_used >= out.odd_params.size())
        fail(Err::ConfigInvalid, "model reserved too few odd parameters");
      ++odd_used;
      out.odd_basis.push_back(std::move(col));
    }
  }
  out.odd_params.resize(odd_used);
  return out;
}

Poly divergence_piece(const Model& m, GenId field, bool full) {
  const GenInfo& gi = m.tab->info(field);
  Poly theta_src = full ? (m.S0 + classical_part(m.V)) : m.theta0;
  Poly s_src = full ? (m.S0 + classical_part(m.V)) : m.S0;
  Poly th = derive(theta_src, m.tab->partner(field), Side::Left);
  if (th.is_zero()) return Poly(m.tab, m.win);
  th.scale(Scalar(Rat(1) / gi.mu));
  Poly row = derive(s_src, field, Side::Left);
  row.scale(Scalar(Rat(1) / gi.mu));
  return poly_mul(th, row);
}

Poly smeared_divergence(const Model& m, const Profile& eta, bool full) {
  Poly out(m.tab, m.win);
  for (GenId g = 0; g < m.tab->size(); ++g) {
    const GenInfo& gi = m.tab->info(g);
    if (gi.kind != GenKind::Field || gi.cell >= m.lat->n_cells()) continue;
    int t = m.lat->cell(gi.cell).t;
    Rat w = eta.at(t);
    if (w == 0) continue;
    Poly piece = divergence_piece(m, g, full);
    if (piece.is_zero()) continue;
    piece.scale(Scalar(w * gi.mu));
    out += piece;
  }
  return out;
}

// overall charge orientation frozen by the free-charge identity on the
// electromagnetic model
constexpr int kChargeSign = 1;

Poly charge(const Model& m, const Profile& eta, bool full) {
  Poly q = smeared_divergence(m, eta, full);
  q.scale(Scalar(-kChargeSign));
  return q;
}

Poly onshell_reduce(const Poly& f, const Model& m, const SolutionSpace& sol, Rng& rng) {
  const GenTable& tab = *f.table();
  // sampled even configuration
  std::map<GenId, Scalar> even_val;
  for (const auto& col : sol.even_basis) {
    Scalar c(Rat(rng.small(3), 1 + static_cast<long>(rng.below(2))));
    if (c.is_zero()) continue;
    for (const auto& [g, v] : col) {
      auto it = even_val.find(g);
      if (it == even_val.end())
        even_val.emplace(g, c * v);
      else
        it->second += c * v;
    }
  }
  // formal odd configuration
  std::map<GenId, Poly> odd_img;
  for (std::size_t k = 0; k < sol.odd_basis.size(); ++k) {
    GenId theta = sol.odd_params[k];
    for (const auto& [g, v] : sol.odd_basis[k]) {
      auto it = odd_img.find(g);
      if (it == odd_img.end()) it = odd_img.emplace(g, Poly(f.table(), f.window())).first;
      it->second += Poly::mono(f.table(), f.window(), Mono{{theta}}, Coeff(f.window(), v));
    }
  }

  Poly out(f.table(), f.window());
  for (const auto& [mono, c] : f.terms()) {
    Poly acc = Poly::constant(f.table(), f.window(), c);
    bool dead = false;
    for (GenId g : mono.g) {
      const GenInfo& gi = tab.info(g);
      bool lattice_field = gi.kind == GenKind::Field && gi.cell < m.lat->n_cells();
      if (!lattice_field) {
        acc = poly_mul(acc, Poly::gen(f.table(), f.window(), g));
      } else if (gi.parity == 0) {
        auto it = even_val.find(g);
        if (it == even_val.end() || it->second.is_zero()) {
          dead = true;
          break;
        }
        acc.scale(it->second);
      } else {
        auto it = odd_img.find(g);
        if (it == odd_img.end() || it->second.is_zero()) {
          dead = true;
          break;
        }
        acc = poly_mul(acc, it->second);
        if (acc.is_zero()) {
          dead = true;
          break;
        }
      }
    }
    if (!dead) out += acc;
  }
  return out;
}

bool onshell_zero(const Poly& f, const Model& m, const SolutionSpace& sol, std::uint64_t seed,
                  int samples) {
  if (f.is_zero()) return true;
  if (samples < 0) samples = static_cast<int>(sol.even_basis.size()) + 2;
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    if (!onshell_reduce(f, m, sol, rng).is_zero()) return false;
  }
  return true;
}

Poly over_ihbar(const Poly& p) {
  Poly out(p.table(), p.window());
  for (const auto& [mono, c] : p.terms()) out.add_term(mono, c.shifted(0, -1, Scalar::I()));
  return out;
}

namespace {

int min_slice(const Model& m, const Poly& f) {
  int lo = 1 << 20;
  for (const auto& [mono, c] : f.terms())
    for (GenId g : mono.g) {
      const GenInfo& gi = m.tab->info(g);
      if (gi.cell < m.lat->n_cells()) lo = std::min(lo, m.lat->cell(gi.cell).t);
    }
  return lo;
}

}  // namespace

CheckRecord check_free_charge(const Model& m, const ProductContext& ctx, const SolutionSpace& sol,
                              const Poly& f, const std::string& tag, std::uint64_t seed) {
  CheckRecord rec;
  rec.id = "free_charge_" + tag;
  rec.anchor = "{F,theta0}_* = (i/hbar)[F,Q0]_* on-shell for antifield-free F";
  auto g = grading(f);
  if (!g || g->ta != 0) {
    rec.status = "SKIPPED";
    rec.note = "argument carries antifields; the charge does not generate there";
    return rec;
  }
  int t_f = min_slice(m, f);
  Profile eta = Profile::step(m, t_f - 1);
  Poly q0 = charge(m, eta, /*full=*/false);
  Poly lhs = antibracket(f, m.theta0, BracketKind::Star, &ctx);
  Poly rhs = over_ihbar(star_commutator(f, q0, ctx));
  Poly defect = lhs - rhs;
  bool ok = onshell_zero(defect, m, sol, seed);
  rec.defect = ok ? "0" : rat_str(defect.norm1());
  rec.status = ok ? "PASS" : "FAIL";
  return rec;
}

CheckRecord check_current_conservation(const InteractionContext& ictx, const SolutionSpace& sol,
                                       const Profile& eta, std::uint64_t seed) {
  CheckRecord rec;
  rec.id = "current_conservation";
  rec.anchor = "interacting smeared divergence vanishes on-shell";
  const Model& m = *ictx.model;
  if (ictx.qme_status != QmeStatus::Pass) {
    rec.status = "SKIPPED";
    rec.note = "master equation not verified";
    return rec;
  }
  Poly an = bulk_restrict(m, extract_anomaly(ictx), m.win.lambda_max);
  if (!an.is_zero()) {
    rec.status = "FAIL";
    rec.note = "anomaly present";
    rec.defect = rat_str(an.norm1());
    return rec;
  }
  Poly dj = smeared_divergence(m, eta, /*full=*/true);
  Poly dressed = bulk_restrict(m, bogoliubov(ictx, dj), m.win.lambda_max);
  bool ok = onshell_zero(dressed, m, sol, seed);
  rec.defect = ok ? "0" : rat_str(dressed.norm1());
  rec.status = ok ? "PASS" : "FAIL";
  rec.lambda_max = m.win.lambda_max;
  return rec;
}

CheckRecord check_main_theorem(const InteractionContext& ictx, const SolutionSpace& sol,
                               const Poly& f, const std::string& tag, std::uint64_t seed) {
  CheckRecord rec;
  rec.id = "main_theorem_" + tag;
  rec.anchor = "(i/hbar)[R_V F, R_V Q]_* = R_V(sF - i hbar Lap_V F) on-shell";
  const Model& m = *ictx.model;
  rec.lambda_max = m.win.lambda_max;
  if (ictx.qme_status != QmeStatus::Pass) {
    rec.status = "SKIPPED";
    rec.note = "master equation not verified";
    return rec;
  }
  Poly an = bulk_restrict(m, extract_anomaly(ictx), m.win.lambda_max);
  if (!an.is_zero()) {
    rec.status = "FAIL";
    rec.note = "anomaly present; theorem hypotheses fail";
    rec.defect = rat_str(an.norm1());
    return rec;
  }
  int t_f = min_slice(m, f);
  if (t_f - 2 <= m.window_lo()) {
    rec.status = "SKIPPED";
    rec.note = "argument too close to the temporal cutoff for charge profiles";
    return rec;
  }
  Profile eta_plus = Profile::step(m, t_f - 1);
  Profile eta_minus = Profile::bump(m, t_f - 2, t_f - 2);

  Poly q_plus = charge(m, eta_plus, /*full=*/true);
  Poly q_minus = charge(m, eta_minus, /*full=*/true);

  Poly rf = bogoliubov(ictx, f);
  Poly rq = bogoliubov(ictx, q_plus);
  Poly lhs_direct = over_ihbar(star_commutator(rf, rq, ictx.prod));
  Poly lhs_glz = bogoliubov_derivative(ictx, f, q_minus) - bogoliubov_derivative(ictx, q_plus, f);

  int order = m.win.lambda_max;
  Rat route_defect = bulk_restrict(m, lhs_direct - lhs_glz, order).norm1();

  Poly shat = quantum_bv(ictx, f);
  Poly rhs = bogoliubov(ictx, shat);

  bool ok_direct = onshell_zero(bulk_restrict(m, lhs_direct - rhs, order), m, sol, seed);
  bool ok_glz = onshell_zero(bulk_restrict(m, lhs_glz - rhs, order), m, sol, seed + 1);

  // interacting-product form, round-tripped through star_v
  Poly comm_v = bogoliubov_inverse(ictx, star_commutator(rf, rq, ictx.prod));
  Poly w = over_ihbar(comm_v) - shat;
  bool ok_v = onshell_zero(bulk_restrict(m, bogoliubov(ictx, w), order), m, sol, seed + 2);

  bool ok = route_defect == 0 && ok_direct && ok_glz && ok_v;
  rec.defect = ok ? "0" : "nonzero";
  rec.note = "route agreement defect " + rat_str(route_defect);
  rec.status = ok ? "PASS" : "FAIL";
  return rec;
}

}  // namespace latbv
