#include "latbv/poly.hpp"

#include <algorithm>
#include <sstream>

namespace latbv {

Poly Poly::constant(GenTablePtr tab, Window win, const Coeff& c) {
  Poly p(std::move(tab), win);
  p.add_term(Mono{}, c);
  return p;
}

Poly Poly::constant(GenTablePtr tab, Window win, const Scalar& s) {
  return constant(std::move(tab), win, Coeff(win, s));
}

Poly Poly::gen(GenTablePtr tab, Window win, GenId g) {
  Poly p(std::move(tab), win);
  p.add_term(Mono{{g}}, Coeff::unit(win));
  return p;
}

Poly Poly::mono(GenTablePtr tab, Window win, const Mono& m, const Coeff& c) {
  Poly p(std::move(tab), win);
  p.add_term(m, c);
  return p;
}

void Poly::add_term(const Mono& m, const Coeff& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Poly::check_compat(const Poly& o) const {
  if (tab_ && o.tab_ && tab_ != o.tab_) fail(Err::WindowMismatch, "generator tables differ");
  if (!(win_ == o.win_)) fail(Err::WindowMismatch, "polynomial windows differ");
}

Poly& Poly::operator+=(const Poly& o) {
  check_compat(o);
  if (!tab_) tab_ = o.tab_;
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  check_compat(o);
  if (!tab_) tab_ = o.tab_;
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Poly Poly::operator-() const {
  Poly r(tab_, win_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

Poly& Poly::scale(const Coeff& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  std::map<Mono, Coeff> out;
  for (const auto& [m, v] : terms_) {
    Coeff w = v * c;
    if (!w.is_zero()) out.emplace(m, std::move(w));
  }
  terms_ = std::move(out);
  return *this;
}

Poly& Poly::scale(const Scalar& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v.scale(s);
  return *this;
}

int Poly::mono_parity(const Mono& m) const {
  int p = 0;
  for (GenId g : m.g) p ^= tab_->parity(g);
  return p;
}

std::optional<int> Poly::parity() const {
  std::optional<int> p;
  for (const auto& [m, c] : terms_) {
    int mp = mono_parity(m);
    if (!p)
      p = mp;
    else if (*p != mp)
      return std::nullopt;
  }
  return p ? p : std::optional<int>(0);
}

int Poly::min_insertion_order() const {
  int best = 1 << 20;
  for (const auto& [m, c] : terms_) best = std::min(best, c.min_insertion_order());
  return best;
}

Coeff Poly::coeff(const Mono& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Coeff(win_) : it->second;
}

Rat Poly::norm1() const {
  Rat n = 0;
  for (const auto& [m, c] : terms_) {
    Rat v = c.norm1();
    if (v > n) n = v;
  }
  return n;
}

std::string Poly::str() const { return serialize(*this); }

bool mono_mul(const GenTable& tab, const Mono& a, const Mono& b, Mono& out, int& sign) {
  out.g.clear();
  out.g.reserve(a.g.size() + b.g.size());
  sign = 1;
  // suffix count of odd generators in a
  std::vector<int> odd_suffix(a.g.size() + 1, 0);
  for (std::size_t i = a.g.size(); i-- > 0;)
    odd_suffix[i] = odd_suffix[i + 1] + tab.parity(a.g[i]);

  std::size_t i = 0, j = 0;
  while (i < a.g.size() && j < b.g.size()) {
    if (a.g[i] <= b.g[j]) {
      if (a.g[i] == b.g[j] && tab.parity(a.g[i])) return false;  // odd square
      out.g.push_back(a.g[i]);
      ++i;
    } else {
      // b[j] jumps over the remaining part of a
      if (tab.parity(b.g[j]) && (odd_suffix[i] & 1)) sign = -sign;
      out.g.push_back(b.g[j]);
      ++j;
    }
  }
  while (i < a.g.size()) out.g.push_back(a.g[i++]);
  while (j < b.g.size()) out.g.push_back(b.g[j++]);
  return true;
}

Poly poly_mul(const Poly& f, const Poly& g) {
  f.check_compat(g);
  const GenTable& tab = *f.table();
  Poly r(f.table(), f.window());
  int budget = f.window().lambda_max + f.window().tag_max0 + f.window().tag_max1;
  Mono prod;
  int sign;
  for (const auto& [ma, ca] : f.terms()) {
    int oa = ca.min_insertion_order();
    for (const auto& [mb, cb] : g.terms()) {
      if (oa + cb.min_insertion_order() > budget) continue;
      if (!mono_mul(tab, ma, mb, prod, sign)) continue;
      Coeff c = ca * cb;
      if (sign < 0) c.scale(Scalar(-1));
      r.add_term(prod, c);
    }
  }
  return r;
}

Poly derive(const Poly& f, GenId g, Side side) {
  const GenTable& tab = *f.table();
  int gp = tab.parity(g);
  Poly r(f.table(), f.window());
  for (const auto& [m, c] : f.terms()) {
    if (gp == 0) {
      // even: multiplicity factor, no signs
      auto lo = std::lower_bound(m.g.begin(), m.g.end(), g);
      if (lo == m.g.end() || *lo != g) continue;
      auto hi = std::upper_bound(lo, m.g.end(), g);
      long mult = static_cast<long>(hi - lo);
      Mono rest;
      rest.g.reserve(m.g.size() - 1);
      rest.g.assign(m.g.begin(), m.g.end());
      rest.g.erase(rest.g.begin() + (lo - m.g.begin()));
      Coeff cc = c;
      cc.scale(Scalar(mult));
      r.add_term(rest, cc);
    } else {
      auto it = std::lower_bound(m.g.begin(), m.g.end(), g);
      if (it == m.g.end() || *it != g) continue;
      std::size_t p = static_cast<std::size_t>(it - m.g.begin());
      int odd_cross = 0;
      if (side == Side::Left) {
        for (std::size_t q = 0; q < p; ++q) odd_cross ^= tab.parity(m.g[q]);
      } else {
        for (std::size_t q = p + 1; q < m.g.size(); ++q) odd_cross ^= tab.parity(m.g[q]);
      }
      Mono rest;
      rest.g.reserve(m.g.size() - 1);
      rest.g.assign(m.g.begin(), m.g.end());
      rest.g.erase(rest.g.begin() + p);
      Coeff cc = c;
      if (odd_cross) cc.scale(Scalar(-1));
      r.add_term(rest, cc);
    }
  }
  return r;
}

Grading mono_grading(const GenTable& tab, const Mono& m) {
  Grading g;
  for (GenId id : m.g) {
    const GenInfo& gi = tab.info(id);
    g.gh += gi.gh;
    g.af += gi.af;
    g.ta += gi.ta;
    g.parity ^= gi.parity;
  }
  return g;
}

std::optional<Grading> grading(const Poly& f) {
  std::optional<Grading> g;
  for (const auto& [m, c] : f.terms()) {
    Grading mg = mono_grading(*f.table(), m);
    if (!g)
      g = mg;
    else if (!(*g == mg))
      return std::nullopt;
  }
  return g ? g : std::optional<Grading>(Grading{});
}

Poly substitute(const Poly& f, const std::map<GenId, Poly>& images) {
  const GenTable& tab = *f.table();
  for (const auto& [g, img] : images) {
    auto p = img.parity();
    if (!img.is_zero() && (!p || *p != tab.parity(g)))
      fail(Err::ParityMismatch, "substitution image parity differs from generator");
  }
  Poly r(f.table(), f.window());
  for (const auto& [m, c] : f.terms()) {
    Poly acc = Poly::constant(f.table(), f.window(), c);
    for (GenId g : m.g) {
      auto it = images.find(g);
      if (it == images.end()) {
        acc = poly_mul(acc, Poly::gen(f.table(), f.window(), g));
      } else {
        acc = poly_mul(acc, it->second);
        if (acc.is_zero()) break;
      }
    }
    r += acc;
  }
  return r;
}

std::set<std::uint32_t> support_of(const Poly& f) {
  std::set<std::uint32_t> s;
  for (const auto& [m, c] : f.terms())
    for (GenId g : m.g) s.insert(f.table()->info(g).cell);
  return s;
}

std::vector<LocalTerm> local_decompose(const Poly& f) {
  const GenTable& tab = *f.table();
  std::vector<LocalTerm> out;
  for (const auto& [m, c] : f.terms()) {
    LocalTerm t;
    t.coefficient = c;
    // canonical order groups generators by cell, so runs split without signs
    std::size_t i = 0;
    while (i < m.g.size()) {
      std::size_t j = i;
      std::uint32_t cell = tab.info(m.g[i]).cell;
      Mono factor;
      while (j < m.g.size() && tab.info(m.g[j]).cell == cell) factor.g.push_back(m.g[j++]);
      t.factors.push_back(Poly::mono(f.table(), f.window(), factor, Coeff::unit(f.window())));
      i = j;
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::string serialize(const Poly& f) {
  std::ostringstream os;
  for (const auto& [m, c] : f.terms()) {
    os << c.str() << " *";
    if (m.empty()) os << " 1";
    for (GenId g : m.g) os << " " << f.table()->display(g);
    os << "\n";
  }
  return os.str();
}

}  // namespace latbv
