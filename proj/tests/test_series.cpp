#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "latbv/series.hpp"

using namespace latbv;

namespace {
Window w2() { return Window::standard(2); }

Coeff lam(int n, const Window& w) { return Coeff::monomial(w, Scalar(1), n, 0); }
}  // namespace

TEST_CASE("scalar arithmetic stays exact") {
  Scalar a(Rat(1, 3), Rat(2, 5));
  Scalar b(Rat(-2, 7), Rat(1, 2));
  Scalar p = a * b;
  CHECK(p.re == Rat(1, 3) * Rat(-2, 7) - Rat(2, 5) * Rat(1, 2));
  CHECK(p.im == Rat(1, 3) * Rat(1, 2) + Rat(2, 5) * Rat(-2, 7));
  Scalar inv = a.inverse();
  CHECK((a * inv) == Scalar(1));
  CHECK(Scalar::I() * Scalar::I() == Scalar(-1));
}

TEST_CASE("series identities from the contract") {
  Window w = w2();
  Coeff one = Coeff::unit(w);
  CHECK((one * one) == one);

  // monomial product with inverse powers of hbar
  Coeff lh = Coeff::monomial(w, Scalar(1), 1, -1);
  Coeff sq = lh * lh;
  CHECK(sq.project(2, -2) == Scalar(1));

  // truncation at lambda order
  Window w1 = Window::standard(1);
  Coeff a = Coeff::unit(w1) + lam(1, w1);
  Coeff b = Coeff::unit(w1) - lam(1, w1);
  CHECK((a * b) == Coeff::unit(w1));
}

TEST_CASE("inverse is geometric in the non-unit part") {
  Window w = w2();
  CHECK(Coeff::unit(w).inverse() == Coeff::unit(w));

  Coeff a = Coeff::unit(w) + Coeff::monomial(w, Scalar(1), 1, 1);
  Coeff inv = a.inverse();
  CHECK(inv.project(0, 0) == Scalar(1));
  CHECK(inv.project(1, 1) == Scalar(-1));
  CHECK(inv.project(2, 2) == Scalar(1));
  CHECK((a * inv) == Coeff::unit(w));

  CHECK_THROWS_AS(lam(1, w).inverse(), Error);
}

TEST_CASE("projection respects the window") {
  Window w = w2();
  Coeff a = Coeff::unit(w) + lam(1, w) + lam(1, w);
  CHECK(a.project(1, 0) == Scalar(2));
  CHECK(a.project(0, 1) == Scalar(0));
  Coeff c = Coeff::monomial(w, Scalar(1), 2, -1);
  CHECK(c.project(2, -1) == Scalar(1));
  CHECK_THROWS_AS(a.project(7, 0), Error);
}

TEST_CASE("ring axioms on random triples") {
  Window w = Window::standard(2, 2);
  Rng rng(99);
  auto rand_coeff = [&]() {
    Coeff c(w);
    for (int t = 0; t < 4; ++t) {
      int m = static_cast<int>(rng.below(3));
      int k = static_cast<int>(rng.below(5)) - (m > 0 ? 1 : 0);
      long num = rng.small(4);
      c += Coeff::monomial(w, Scalar(Rat(num, 1 + static_cast<long>(rng.below(3)))), m, k);
    }
    return c;
  };
  for (int i = 0; i < 30; ++i) {
    Coeff a = rand_coeff(), b = rand_coeff(), c = rand_coeff();
    CHECK(((a * b) * c) == (a * (b * c)));
    CHECK((a * (b + c)) == (a * b + a * c));
    CHECK((a * b) == (b * a));
  }
}

TEST_CASE("truncation is a ring morphism") {
  // compare products computed in a wide window and then truncated with
  // products computed in the narrow window directly
  Window wide = Window::standard(4);
  Window narrow = Window::standard(2);
  Rng rng(7);
  auto rand_wide = [&]() {
    Coeff c(wide);
    for (int t = 0; t < 4; ++t) {
      int m = static_cast<int>(rng.below(3));
      int k = static_cast<int>(rng.below(4)) - (m > 0 ? 1 : 0);
      c += Coeff::monomial(wide, Scalar(Rat(rng.small(3))), m, k);
    }
    return c;
  };
  auto truncate = [&](const Coeff& c) {
    Coeff out(narrow);
    for (const auto& [e, s] : c.terms()) {
      if (e.lam <= narrow.lambda_max && e.hbar >= narrow.hbar_min && e.hbar <= narrow.hbar_max)
        out.add_term(e, s);
    }
    return out;
  };
  for (int i = 0; i < 20; ++i) {
    Coeff a = rand_wide(), b = rand_wide();
    CHECK(truncate(a * b) == (truncate(a) * truncate(b)));
  }
}

TEST_CASE("window mismatch is rejected") {
  Coeff a = Coeff::unit(Window::standard(2));
  Coeff b = Coeff::unit(Window::standard(3));
  CHECK_THROWS_AS(a * b, Error);
}

TEST_CASE("nilpotent tags carry first derivatives") {
  Window w = Window::standard(2, 2);
  Coeff t0 = Coeff::monomial(w, Scalar(1), 0, 0, 1, 0);
  CHECK((t0 * t0).is_zero());
  Coeff a = Coeff::unit(w) + t0;
  Coeff b = a * a;
  CHECK(b.tag_part(0) == (Coeff::unit(w) + Coeff::unit(w)));
  CHECK(b.untagged() == Coeff::unit(w));
  // tagged insertions license inverse hbar powers
  Coeff th = Coeff::monomial(w, Scalar(1), 0, -1, 1, 0);
  CHECK(th.project(0, -1, 1, 0) == Scalar(1));
  CHECK_THROWS_AS(Coeff::monomial(w, Scalar(1), 0, -1), Error);
}

TEST_CASE("shift guards the Laurent bound") {
  Window w = Window::standard(2);
  Coeff v = lam(1, w);
  Coeff shifted = v.shifted(0, -1, Scalar::I());
  CHECK(shifted.project(1, -1) == Scalar::I());
  CHECK_THROWS_AS(shifted.shifted(0, -1, Scalar(1)), Error);
}
