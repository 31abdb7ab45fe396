#include "latbv/model.hpp"

#include <algorithm>

namespace latbv {

namespace {

Rat slice_profile(int t, int nt, int margin, int ramp) {
  int lo = margin, hi = nt - 1 - margin;
  if (t < lo || t > hi) return 0;
  Rat up = 1;
  if (ramp > 0) {
    if (t - lo < ramp) up = Rat(t - lo + 1) / Rat(ramp + 1);
    Rat down = 1;
    if (hi - t < ramp) down = Rat(hi - t + 1) / Rat(ramp + 1);
    if (down < up) up = down;
  }
  return up;
}

Rat cell_cutoff(const Lattice& lat, CellId id, int margin, int ramp) {
  const Cell& c = lat.cell(id);
  Rat f = slice_profile(c.t, lat.nt(), margin, ramp);
  if (c.type == CellType::TEdge || c.type == CellType::Plaq) {
    int t2 = c.t + 1;
    Rat f2 = t2 >= lat.nt() ? Rat(0) : slice_profile(t2, lat.nt(), margin, ramp);
    if (f2 < f) f = f2;
  }
  return f;
}

struct Builder {
  std::shared_ptr<Lattice> lat;
  Window win;
  std::vector<Member> members;
  int n_aux_odd = 0;  // formal odd parameters reserved for on-shell reduction
  std::shared_ptr<GenTable> tab = std::make_shared<GenTable>();
  std::vector<std::vector<GenId>> field_ids, antifield_ids;

  void make_generators() {
    field_ids.assign(members.size(), std::vector<GenId>(lat->n_cells(), kNoGen));
    antifield_ids = field_ids;
    for (CellId c = 0; c < lat->n_cells(); ++c) {
      int deg = Lattice::degree(lat->cell(c).type);
      for (std::size_t m = 0; m < members.size(); ++m) {
        if (members[m].degree != deg) continue;
        GenInfo fi;
        fi.name = members[m].name;
        fi.member = static_cast<int>(m);
        fi.cell = c;
        fi.kind = GenKind::Field;
        fi.parity = members[m].parity;
        fi.gh = members[m].gh;
        fi.af = 0;
        fi.ta = 0;
        fi.time2 = lat->time2(c);
        fi.mu = lat->measure();
        fi.metric = lat->metric_sign(c);
        GenId f = tab->add(fi);
        GenInfo ai = fi;
        ai.kind = GenKind::Antifield;
        ai.parity = 1 - fi.parity;
        ai.gh = -fi.gh - 1;
        ai.af = std::max(0, -ai.gh);
        ai.ta = 1;
        GenId a = tab->add(ai);
        field_ids[m][c] = f;
        antifield_ids[m][c] = a;
      }
    }
    // wire partners
    for (std::size_t m = 0; m < members.size(); ++m)
      for (CellId c = 0; c < lat->n_cells(); ++c) {
        if (field_ids[m][c] == kNoGen) continue;
        const_cast<GenInfo&>(tab->info(field_ids[m][c])).partner = antifield_ids[m][c];
        const_cast<GenInfo&>(tab->info(antifield_ids[m][c])).partner = field_ids[m][c];
      }
    for (int k = 0; k < n_aux_odd; ++k) {
      GenInfo pi;
      pi.name = "th" + std::to_string(k);
      pi.member = -1;
      pi.cell = static_cast<CellId>(lat->n_cells()) + static_cast<CellId>(k);
      pi.kind = GenKind::Field;
      pi.parity = 1;
      pi.mu = 1;
      pi.metric = 1;
      tab->add(pi);
    }
    tab->freeze();
  }

  Poly gen(GenId g) const { return Poly::gen(tab, win, g); }

  // linear poly: sum of matrix row applied to member fields
  Poly mat_row(const SparseMat& mat, CellId row, int member) const {
    Poly p(tab, win);
    for (const auto& [rc, v] : mat.entries()) {
      if (rc.first != row) continue;
      GenId g = field_ids[member][rc.second];
      if (g == kNoGen) continue;
      p += Poly::mono(tab, win, Mono{{g}}, Coeff(win, Scalar(v)));
    }
    return p;
  }
};

void extract_kernels(Model& m);

}  // namespace

void refresh_kernels(Model& m) { extract_kernels(m); }

namespace {

void extract_kernels(Model& m) {
  m.P = Kernel(m.tab);
  m.K = Kernel(m.tab);
  for (GenId i = 0; i < m.tab->size(); ++i) {
    if (!m.tab->is_field(i)) continue;
    const Rat& mu_i = m.tab->info(i).mu;
    Poly prow = derive(m.S0, i, Side::Left);
    for (const auto& [mono, c] : prow.terms()) {
      if (mono.degree() != 1) continue;
      GenId j = mono.g[0];
      Scalar v = c.project(0, 0);
      v *= Scalar(Rat(1) / (mu_i * m.tab->info(j).mu));
      m.P.add(i, j, v);
    }
    Poly krow = derive(m.theta0, m.tab->partner(i), Side::Left);
    for (const auto& [mono, c] : krow.terms()) {
      if (mono.degree() != 1) continue;
      GenId j = mono.g[0];
      if (!m.tab->is_field(j)) continue;
      Scalar v = c.project(0, 0);
      v *= Scalar(Rat(1) / (mu_i * m.tab->info(j).mu));
      m.K.add(i, j, v);
    }
  }
}

}  // namespace

GenId Model::field_gen(int member, CellId cell) const { return field_ids_[member][cell]; }
GenId Model::antifield_gen(int member, CellId cell) const { return antifield_ids_[member][cell]; }

Rat Model::f_slice(int t) const { return slice_profile(t, lat->nt(), margin, ramp); }

int Model::plateau_lo() const { return margin + ramp; }
int Model::plateau_hi() const { return lat->nt() - 1 - margin - ramp; }

bool Model::bulk_cell(CellId c, int extra) const {
  if (c >= lat->n_cells()) return false;  // formal parameter slots
  const Cell& cc = lat->cell(c);
  int lo = plateau_lo() + extra, hi = plateau_hi() - extra;
  int t0 = cc.t;
  int t1 = (cc.type == CellType::TEdge || cc.type == CellType::Plaq) ? cc.t + 1 : cc.t;
  return t0 >= lo && t1 <= hi;
}

bool Model::bulk_gen(GenId g, int extra) const { return bulk_cell(tab->info(g).cell, extra); }

Poly Model::eom_row(GenId field) const {
  Poly row = derive(S0, field, Side::Left);
  row.scale(Scalar(Rat(1) / tab->info(field).mu));
  return row;
}

Model build_em_model(std::shared_ptr<Lattice> lat, Window win, const Rat& xi,
                     std::optional<std::uint64_t> current_seed, int margin, int ramp) {
  Builder b;
  b.lat = lat;
  b.win = win;
  b.members = {
      {"A", 1, 0, 0},
      {"B", 0, 0, 0},
      {"C", 0, 1, 1},
      {"Cb", 0, 1, -1},
  };
  b.n_aux_odd = 4 * lat->nx() + 4;
  b.make_generators();

  Model m;
  m.lat = lat;
  m.tab = b.tab;
  m.win = win;
  m.name = "em";
  m.members = b.members;
  m.field_ids_ = b.field_ids;
  m.antifield_ids_ = b.antifield_ids;
  m.cone_speed = 2;
  m.margin = margin;
  m.ramp = ramp;
  m.f.resize(lat->n_cells());
  for (CellId c = 0; c < lat->n_cells(); ++c) m.f[c] = cell_cutoff(*lat, c, m.margin, m.ramp);

  const Rat mu = lat->measure();
  Poly S0(m.tab, win), theta0(m.tab, win);
  const int A = 0, B = 1, C = 2, Cb = 3;

  // 1/2 <f dA, dA> over plaquettes
  for (CellId pl : lat->cells_of(CellType::Plaq)) {
    if (m.f[pl] == 0) continue;
    Poly dA = b.mat_row(lat->d(1), pl, A);
    Poly term = poly_mul(dA, dA);
    term.scale(Scalar(lat->metric_sign(pl) * mu * m.f[pl] / 2));
    S0 += term;
  }
  for (CellId v : lat->cells_of(CellType::Vertex)) {
    if (m.f[v] == 0) continue;
    Poly Bv = b.gen(b.field_ids[B][v]);
    // xi <f B, codiff A> - 1/2 <f B, B>
    Poly dAv = b.mat_row(lat->codiff(1), v, A);
    Poly gauge = poly_mul(Bv, dAv);
    gauge.scale(Scalar(mu * m.f[v] * xi));
    S0 += gauge;
    Poly bb = poly_mul(Bv, Bv);
    bb.scale(Scalar(-mu * m.f[v] / 2));
    S0 += bb;
    // i <f Cb+, B> in theta0
    Poly tb = poly_mul(b.gen(b.antifield_ids[Cb][v]), Bv);
    tb.scale(Scalar(Rat(0), mu * m.f[v]));
    theta0 += tb;
  }
  // i xi <f dCb, dC> over edges, Cb factor to the left; and <f A+, dC>
  for (CellId e : lat->cells_of(CellType::TEdge)) {
    if (m.f[e] == 0) continue;
    Poly gh = poly_mul(b.mat_row(lat->d(0), e, Cb), b.mat_row(lat->d(0), e, C));
    gh.scale(Scalar(Rat(0), lat->metric_sign(e) * mu * m.f[e] * xi));
    S0 += gh;
    Poly th = poly_mul(b.gen(b.antifield_ids[A][e]), b.mat_row(lat->d(0), e, C));
    th.scale(Scalar(mu * m.f[e]));
    theta0 += th;
  }
  for (CellId e : lat->cells_of(CellType::XEdge)) {
    if (m.f[e] == 0) continue;
    Poly gh = poly_mul(b.mat_row(lat->d(0), e, Cb), b.mat_row(lat->d(0), e, C));
    gh.scale(Scalar(Rat(0), lat->metric_sign(e) * mu * m.f[e] * xi));
    S0 += gh;
    Poly th = poly_mul(b.gen(b.antifield_ids[A][e]), b.mat_row(lat->d(0), e, C));
    th.scale(Scalar(mu * m.f[e]));
    theta0 += th;
  }

  m.S0 = S0;
  m.theta0 = theta0;

  // V = theta0 + <j, A> at first order in the coupling, j = codiff(beta)
  Poly V = theta0;
  if (current_seed) {
    Rng rng(*current_seed);
    // beta: 2-form supported strictly inside the plateau
    std::vector<Rat> beta(lat->n_cells(), Rat(0));
    for (CellId pl : lat->cells_of(CellType::Plaq)) {
      if (!m.bulk_cell(pl, 1)) continue;
      beta[pl] = Rat(rng.small(3));
    }
    // j_e = codiff(beta)_e
    std::vector<Rat> j(lat->n_cells(), Rat(0));
    for (const auto& [rc, v] : lat->codiff(2).entries()) j[rc.first] += v * beta[rc.second];
    // conservation is automatic (codiff^2 = 0); verify anyway
    std::vector<Rat> dj(lat->n_cells(), Rat(0));
    for (const auto& [rc, v] : lat->codiff(1).entries()) dj[rc.first] += v * j[rc.second];
    for (const Rat& r : dj)
      if (r != 0) fail(Err::CurrentNotConserved, "constructed current has nonzero divergence");
    Poly source(m.tab, win);
    for (CellId e = 0; e < lat->n_cells(); ++e) {
      if (j[e] == 0) continue;
      GenId g = b.field_ids[A][e];
      if (g == kNoGen) continue;
      source += Poly::mono(m.tab, win, Mono{{g}},
                           Coeff(win, Scalar(lat->metric_sign(e) * mu * j[e])));
    }
    V += source;
  }
  V.scale(Coeff::monomial(win, Scalar(1), 1, 0));
  m.V = V;

  extract_kernels(m);
  return m;
}

Model build_scalar_model(std::shared_ptr<Lattice> lat, Window win, const Rat& mass, const Rat& g3,
                         const Rat& g4, int margin, int ramp) {
  if (mass < 0) fail(Err::ConfigInvalid, "mass must be >= 0");
  Builder b;
  b.lat = lat;
  b.win = win;
  b.members = {{"phi", 0, 0, 0}};
  b.make_generators();

  Model m;
  m.lat = lat;
  m.tab = b.tab;
  m.win = win;
  m.name = "scalar";
  m.members = b.members;
  m.field_ids_ = b.field_ids;
  m.antifield_ids_ = b.antifield_ids;
  m.cone_speed = 1;
  m.margin = margin;
  m.ramp = ramp;
  m.f.resize(lat->n_cells());
  for (CellId c = 0; c < lat->n_cells(); ++c) m.f[c] = cell_cutoff(*lat, c, m.margin, m.ramp);

  const Rat mu = lat->measure();
  Poly S0(m.tab, win);
  for (CellId e : lat->cells_of(CellType::TEdge)) {
    if (m.f[e] == 0) continue;
    Poly d = b.mat_row(lat->d(0), e, 0);
    Poly term = poly_mul(d, d);
    term.scale(Scalar(lat->metric_sign(e) * mu * m.f[e] / 2));
    S0 += term;
  }
  for (CellId e : lat->cells_of(CellType::XEdge)) {
    if (m.f[e] == 0) continue;
    Poly d = b.mat_row(lat->d(0), e, 0);
    Poly term = poly_mul(d, d);
    term.scale(Scalar(lat->metric_sign(e) * mu * m.f[e] / 2));
    S0 += term;
  }
  Poly V(m.tab, win);
  for (CellId v : lat->cells_of(CellType::Vertex)) {
    if (m.f[v] == 0) continue;
    Poly phi = b.gen(b.field_ids[0][v]);
    if (mass != 0) {
      Poly mm = poly_mul(phi, phi);
      mm.scale(Scalar(-mu * m.f[v] * mass * mass / 2));
      S0 += mm;
    }
    Poly p2 = poly_mul(phi, phi);
    if (g3 != 0) {
      Poly p3 = poly_mul(p2, phi);
      p3.scale(Scalar(mu * m.f[v] * g3 / 6));
      V += p3;
    }
    if (g4 != 0) {
      Poly p4 = poly_mul(p2, p2);
      p4.scale(Scalar(mu * m.f[v] * g4 / 24));
      V += p4;
    }
  }
  V.scale(Coeff::monomial(win, Scalar(1), 1, 0));
  m.S0 = S0;
  m.theta0 = Poly(m.tab, win);
  m.V = V;

  extract_kernels(m);
  return m;
}

TaylorSplit taylor_split(const Poly& s, const std::map<GenId, Scalar>& phi0) {
  std::map<GenId, Poly> images;
  for (const auto& [g, v] : phi0) {
    Poly img = Poly::gen(s.table(), s.window(), g);
    img += Poly::constant(s.table(), s.window(), v);
    if (s.table()->parity(g)) fail(Err::ParityMismatch, "background must be even");
    images.emplace(g, img);
  }
  Poly shifted = substitute(s, images);
  TaylorSplit out;
  out.constant = Coeff(s.window());
  out.linear = Poly(s.table(), s.window());
  out.quadratic = Poly(s.table(), s.window());
  out.higher = Poly(s.table(), s.window());
  for (const auto& [m, c] : shifted.terms()) {
    switch (m.degree()) {
      case 0:
        out.constant += c;
        break;
      case 1:
        out.linear.add_term(m, c);
        break;
      case 2:
        out.quadratic.add_term(m, c);
        break;
      default:
        out.higher.add_term(m, c);
    }
  }
  return out;
}

int check_margin(const Model& m, int order) { return m.stencil_radius * (1 + order); }

Kernel raised_P(const Model& m) {
  Kernel r(m.tab);
  for (const auto& [ij, v] : m.P.entries()) {
    Scalar w = v;
    w *= Scalar(Rat(1) / m.tab->info(ij.first).metric);
    r.add(ij.first, ij.second, w);
  }
  return r;
}

CheckRecord check_pk_condition(const Model& m) {
  CheckRecord rec;
  rec.id = "pk_condition";
  rec.anchor = "kinetic/symmetry compatibility P.K + K^dag.P = 0 and P = P^dag";
  Kernel pk = compose(m.P, m.K);
  Kernel signed_pk(m.tab);
  for (const auto& [ij, v] : pk.entries()) {
    Scalar w = v;
    if (m.tab->parity(ij.first)) w = -w;
    signed_pk.add(ij.first, ij.second, w);
  }
  Kernel defect = signed_pk + compose(m.K.graded_adjoint(), m.P);

  int extra = check_margin(m, 0) + m.stencil_radius;
  auto bulk_pair = [&](GenId i, GenId j) { return m.bulk_gen(i, extra) && m.bulk_gen(j, extra); };
  Rat d1 = defect.norm1_over(bulk_pair);

  Kernel pop = raised_P(m);
  Kernel adj_defect = pop - pop.graded_adjoint();
  Rat d2 = adj_defect.norm1_over(bulk_pair);

  Rat d = std::max(d1, d2);
  rec.defect = rat_str(d);
  rec.status = d == 0 ? "PASS" : "FAIL";
  return rec;
}

}  // namespace latbv
