#include "latbv/series.hpp"

#include <atomic>
#include <sstream>

namespace latbv {

namespace {
std::atomic<std::uint64_t> g_trunc_tally{0};
}

std::uint64_t Coeff::truncation_tally() { return g_trunc_tally.load(); }
void Coeff::reset_truncation_tally() { g_trunc_tally.store(0); }

bool Coeff::inside(const SeriesExp& e) const {
  return e.lam >= 0 && e.lam <= win_.lambda_max && e.hbar >= win_.hbar_min &&
         e.hbar <= win_.hbar_max && e.tag0 >= 0 && e.tag0 <= win_.tag_max0 && e.tag1 >= 0 &&
         e.tag1 <= win_.tag_max1;
}

void Coeff::check_window(const Coeff& o) const {
  if (!(win_ == o.win_)) fail(Err::WindowMismatch, "series truncation windows differ");
}

Coeff Coeff::monomial(Window w, const Scalar& s, int lam, int hbar, int tag0, int tag1) {
  Coeff c(w);
  SeriesExp e{static_cast<std::int16_t>(lam), static_cast<std::int16_t>(hbar),
              static_cast<std::int8_t>(tag0), static_cast<std::int8_t>(tag1)};
  if (hbar < -(lam + tag0 + tag1)) fail(Err::LaurentOverflow, "hbar power below -(lam+tags)");
  if (!c.inside(e)) fail(Err::WindowMismatch, "series monomial outside window");
  c.add_term(e, s);
  return c;
}

int Coeff::min_insertion_order() const {
  int best = 1 << 20;
  for (const auto& [e, s] : terms_) {
    int o = e.insertion_order();
    if (o < best) best = o;
  }
  return best;
}

void Coeff::add_term(const SeriesExp& e, const Scalar& s) {
  if (s.is_zero()) return;
  if (!inside(e)) {
    ++g_trunc_tally;
    return;
  }
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, s);
  } else {
    it->second += s;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Coeff& Coeff::operator+=(const Coeff& o) {
  check_window(o);
  for (const auto& [e, s] : o.terms_) add_term(e, s);
  return *this;
}

Coeff& Coeff::operator-=(const Coeff& o) {
  check_window(o);
  for (const auto& [e, s] : o.terms_) add_term(e, -s);
  return *this;
}

Coeff Coeff::operator-() const {
  Coeff r(win_);
  for (const auto& [e, s] : terms_) r.terms_.emplace(e, -s);
  return r;
}

Coeff operator*(const Coeff& a, const Coeff& b) {
  a.check_window(b);
  Coeff r(a.win_);
  for (const auto& [ea, sa] : a.terms_) {
    for (const auto& [eb, sb] : b.terms_) {
      SeriesExp e{static_cast<std::int16_t>(ea.lam + eb.lam),
                  static_cast<std::int16_t>(ea.hbar + eb.hbar),
                  static_cast<std::int8_t>(ea.tag0 + eb.tag0),
                  static_cast<std::int8_t>(ea.tag1 + eb.tag1)};
      r.add_term(e, sa * sb);
    }
  }
  return r;
}

Coeff& Coeff::scale(const Scalar& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= s;
  return *this;
}

Coeff Coeff::shifted(int dlam, int dhbar, const Scalar& mult) const {
  Coeff r(win_);
  for (const auto& [e, s] : terms_) {
    SeriesExp f{static_cast<std::int16_t>(e.lam + dlam), static_cast<std::int16_t>(e.hbar + dhbar),
                e.tag0, e.tag1};
    if (f.lam < 0 || f.hbar < -(f.lam + f.tag0 + f.tag1))
      fail(Err::LaurentOverflow, "shift drives hbar power below -(lam+tags)");
    r.add_term(f, s * mult);
  }
  return r;
}

Coeff Coeff::inverse() const {
  auto it = terms_.find(SeriesExp{});
  if (it == terms_.end() || it->second.is_zero())
    fail(Err::NotInvertible, "no unit part at lam^0 hbar^0");
  Scalar u_inv = it->second.inverse();
  // a = u(1 - r) with r nilpotent in the quotient; invert by geometric series
  Coeff r(win_);
  for (const auto& [e, s] : terms_) {
    if (e == SeriesExp{}) continue;
    r.add_term(e, -(s * u_inv));
  }
  Coeff acc = Coeff::unit(win_);
  Coeff pow = Coeff::unit(win_);
  int bound = win_.lambda_max + (win_.hbar_max - 0) + win_.tag_max0 + win_.tag_max1 + 1;
  for (int n = 1; n <= bound; ++n) {
    pow = pow * r;
    if (pow.is_zero()) break;
    acc += pow;
  }
  acc.scale(u_inv);
  return acc;
}

Scalar Coeff::project(int lam, int hbar, int tag0, int tag1) const {
  SeriesExp e{static_cast<std::int16_t>(lam), static_cast<std::int16_t>(hbar),
              static_cast<std::int8_t>(tag0), static_cast<std::int8_t>(tag1)};
  if (!inside(e)) fail(Err::WindowMismatch, "projection exponent outside window");
  auto it = terms_.find(e);
  return it == terms_.end() ? Scalar() : it->second;
}

Coeff Coeff::tag_part(int tag_idx) const {
  Coeff r(win_);
  for (const auto& [e, s] : terms_) {
    if (tag_idx == 0 && e.tag0 == 1) {
      SeriesExp f = e;
      f.tag0 = 0;
      r.add_term(f, s);
    } else if (tag_idx == 1 && e.tag1 == 1) {
      SeriesExp f = e;
      f.tag1 = 0;
      r.add_term(f, s);
    }
  }
  return r;
}

Coeff Coeff::untagged() const {
  Coeff r(win_);
  for (const auto& [e, s] : terms_)
    if (e.tag0 == 0 && e.tag1 == 0) r.add_term(e, s);
  return r;
}

Rat Coeff::norm1() const {
  Rat n = 0;
  for (const auto& [e, s] : terms_) {
    Rat v = s.norm1();
    if (v > n) n = v;
  }
  return n;
}

std::string Coeff::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, s] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << s.str() << ")";
    if (e.lam) os << "*lam^" << e.lam;
    if (e.hbar) os << "*hbar^" << e.hbar;
    if (e.tag0) os << "*t0";
    if (e.tag1) os << "*t1";
  }
  return os.str();
}

}  // namespace latbv
