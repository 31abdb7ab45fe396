#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "latbv/poly.hpp"
#include "latbv/sampling.hpp"
#include "test_utils.hpp"

using namespace latbv;

namespace {

// tiny hand-made table: two even fields, two odd fields, with antifields
struct Tiny {
  GenTablePtr tab;
  Window win = Window::standard(2);
  GenId a, b, c1, c2, a_af, c1_af;

  Tiny() {
    auto t = std::make_shared<GenTable>();
    auto mk = [&](const char* name, int parity, GenKind kind, int gh, std::uint32_t cell) {
      GenInfo gi;
      gi.name = name;
      gi.cell = cell;
      gi.kind = kind;
      gi.parity = parity;
      gi.gh = gh;
      gi.ta = kind == GenKind::Antifield ? 1 : 0;
      gi.af = kind == GenKind::Antifield ? std::max(0, -(-gh - 1)) : 0;
      return t->add(gi);
    };
    a = mk("a", 0, GenKind::Field, 0, 0);
    a_af = mk("a+", 1, GenKind::Antifield, -1, 0);
    b = mk("b", 0, GenKind::Field, 0, 1);
    c1 = mk("c1", 1, GenKind::Field, 1, 2);
    c1_af = mk("c1+", 0, GenKind::Antifield, -2, 2);
    c2 = mk("c2", 1, GenKind::Field, 1, 3);
    const_cast<GenInfo&>(t->info(a)).partner = a_af;
    const_cast<GenInfo&>(t->info(a_af)).partner = a;
    const_cast<GenInfo&>(t->info(c1)).partner = c1_af;
    const_cast<GenInfo&>(t->info(c1_af)).partner = c1;
    t->freeze();
    tab = t;
  }

  Poly gen(GenId g) const { return Poly::gen(tab, win, g); }
  Poly one() const { return Poly::constant(tab, win, Scalar(1)); }
};

}  // namespace

TEST_CASE("odd squares vanish and odd generators anticommute") {
  Tiny t;
  Poly c1 = t.gen(t.c1), c2 = t.gen(t.c2);
  CHECK(poly_mul(c1, c1).is_zero());
  CHECK((poly_mul(c1, c2) + poly_mul(c2, c1)).is_zero());
  Poly phi = t.gen(t.a);
  Poly lhs = poly_mul(phi, phi + t.one());
  Poly rhs = poly_mul(phi, phi) + phi;
  CHECK(lhs == rhs);
}

TEST_CASE("left derivative conventions") {
  Tiny t;
  Poly aa = poly_mul(t.gen(t.a), t.gen(t.a));
  Poly d = derive(aa, t.a, Side::Left);
  Poly two_a = t.gen(t.a);
  two_a.scale(Scalar(2));
  CHECK(d == two_a);

  Poly c1c2 = poly_mul(t.gen(t.c1), t.gen(t.c2));
  CHECK(derive(c1c2, t.c1, Side::Left) == t.gen(t.c2));
  CHECK(derive(c1c2, t.c2, Side::Left) == -t.gen(t.c1));
  // absent generator differentiates to zero
  CHECK(derive(c1c2, t.b, Side::Left).is_zero());
}

TEST_CASE("left and right derivatives agree up to the graded sign") {
  Tiny t;
  Rng rng(3);
  for (int kase = 0; kase < 20; ++kase) {
    // random homogeneous monomial
    std::vector<GenId> pool{t.a, t.b, t.c1, t.c2, t.a_af, t.c1_af};
    Mono m;
    int parity = 0;
    for (int i = 0; i < 3; ++i) {
      GenId g = pool[rng.below(pool.size())];
      if (t.tab->parity(g) && std::count(m.g.begin(), m.g.end(), g)) continue;
      m.g.push_back(g);
      parity ^= t.tab->parity(g);
    }
    std::sort(m.g.begin(), m.g.end());
    Poly f = Poly::mono(t.tab, t.win, m, Coeff::unit(t.win));
    for (GenId g : {t.a, t.c1, t.c2}) {
      int gp = t.tab->parity(g);
      Poly l = derive(f, g, Side::Left);
      Poly r = derive(f, g, Side::Right);
      // d^r F = (-1)^{|g|(|F|+|g|)} d^l F
      if (gp && ((parity + gp) & 1)) l.scale(Scalar(-1));
      CHECK(l == r);
    }
  }
}

TEST_CASE("supercommutativity with Koszul signs") {
  Model m = testutil::em(8, 2);
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    SampleOpts opts;
    opts.want_parity = static_cast<int>(rng.below(2));
    Poly f = random_poly(m, rng, opts);
    opts.want_parity = static_cast<int>(rng.below(2));
    Poly g = random_poly(m, rng, opts);
    auto pf = f.parity(), pg = g.parity();
    REQUIRE(pf);
    REQUIRE(pg);
    Poly fg = poly_mul(f, g);
    Poly gf = poly_mul(g, f);
    if (*pf && *pg) gf.scale(Scalar(-1));
    CHECK(fg == gf);
  }
}

TEST_CASE("graded Leibniz rule for derivatives over products") {
  Model m = testutil::em(8, 2);
  Rng rng(13);
  for (int i = 0; i < 20; ++i) {
    SampleOpts opts;
    opts.want_parity = static_cast<int>(rng.below(2));
    Poly f = random_poly(m, rng, opts);
    Poly g = random_poly(m, rng);
    auto pf = f.parity();
    REQUIRE(pf);
    GenId gen = static_cast<GenId>(rng.below(m.tab->size()));
    Poly lhs = derive(poly_mul(f, g), gen, Side::Left);
    Poly rhs = poly_mul(derive(f, gen, Side::Left), g);
    Poly t2 = poly_mul(f, derive(g, gen, Side::Left));
    if (m.tab->parity(gen) && *pf) t2.scale(Scalar(-1));
    rhs += t2;
    CHECK(lhs == rhs);
  }
}

TEST_CASE("grading bookkeeping") {
  Model m = testutil::em(8, 2);
  const Lattice& lat = *m.lat;
  GenId a = m.field_gen(0, lat.xedge(3, 0));
  GenId c = m.field_gen(2, lat.vertex(3, 0));
  GenId a_af = m.antifield_gen(0, lat.xedge(3, 1));

  auto g1 = grading(m.gen_poly(a));
  REQUIRE(g1);
  CHECK(g1->gh == 0);
  CHECK(g1->af == 0);
  CHECK(g1->ta == 0);
  CHECK(g1->parity == 0);

  auto g2 = grading(poly_mul(m.gen_poly(c), m.gen_poly(a_af)));
  REQUIRE(g2);
  CHECK(g2->gh == 0);
  CHECK(g2->af == 1);
  CHECK(g2->ta == 1);
  CHECK(g2->parity == 0);

  CHECK(!grading(m.gen_poly(a) + m.gen_poly(c)));
}

TEST_CASE("substitution is a graded homomorphism") {
  Tiny t;
  // identity map
  Poly f = poly_mul(t.gen(t.a), t.gen(t.c1)) + t.gen(t.b);
  CHECK(substitute(f, {}) == f);

  // a -> 0 kills products containing a
  std::map<GenId, Poly> kill{{t.a, Poly(t.tab, t.win)}};
  CHECK(substitute(poly_mul(t.gen(t.a), t.gen(t.c1)), kill).is_zero());

  // antifield shift and inverse shift compose to the identity
  Poly psi_d = t.gen(t.c1);  // pretend derivative of a fermion: odd like a_af
  std::map<GenId, Poly> shift{{t.a_af, t.gen(t.a_af) + psi_d}};
  std::map<GenId, Poly> unshift{{t.a_af, t.gen(t.a_af) - psi_d}};
  Poly g = poly_mul(t.gen(t.a_af), t.gen(t.a)) + poly_mul(t.gen(t.c1), t.gen(t.a_af));
  CHECK(substitute(substitute(g, shift), unshift) == g);

  // parity mismatch rejected
  std::map<GenId, Poly> bad{{t.a, t.gen(t.c1)}};
  CHECK_THROWS_AS(substitute(t.gen(t.a), bad), Error);
}

TEST_CASE("support and local factorization") {
  Model m = testutil::em(8, 2);
  const Lattice& lat = *m.lat;
  GenId x = m.field_gen(1, lat.vertex(3, 0));
  GenId y = m.field_gen(1, lat.vertex(4, 1));
  Poly f = poly_mul(m.gen_poly(x), m.gen_poly(y));
  auto supp = support_of(f);
  CHECK(supp.size() == 2);
  CHECK(support_of(m.constant(Scalar(1))).empty());

  Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    Poly a = random_poly(m, rng), b = random_poly(m, rng);
    auto sa = support_of(a), sb = support_of(b), sab = support_of(poly_mul(a, b));
    for (auto c : sab) CHECK((sa.count(c) || sb.count(c)));
  }

  auto terms = local_decompose(f);
  REQUIRE(terms.size() == 1);
  CHECK(terms[0].factors.size() == 2);
  Poly same = poly_mul(m.gen_poly(x), m.gen_poly(x));
  auto terms2 = local_decompose(same);
  REQUIRE(terms2.size() == 1);
  CHECK(terms2[0].factors.size() == 1);

  // termwise: product of the factors re-assembles each term
  Rng rng2(17);
  Poly p = random_poly(m, rng2);
  Poly rebuilt(p.table(), p.window());
  for (const auto& term : local_decompose(p)) {
    Poly acc = Poly::constant(p.table(), p.window(), term.coefficient);
    for (const auto& fac : term.factors) acc = poly_mul(acc, fac);
    rebuilt += acc;
  }
  CHECK(rebuilt == p);
}

TEST_CASE("serialization is deterministic and sorted") {
  Tiny t;
  Poly f = poly_mul(t.gen(t.a), t.gen(t.c1)) + t.gen(t.b);
  std::string s1 = serialize(f);
  std::string s2 = serialize(poly_mul(t.gen(t.a), t.gen(t.c1)) + t.gen(t.b));
  CHECK(s1 == s2);
  CHECK(s1.find("a@0") != std::string::npos);
}
