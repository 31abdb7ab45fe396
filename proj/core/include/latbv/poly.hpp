#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "latbv/gens.hpp"
#include "latbv/series.hpp"

namespace latbv {

// Monomial: generator ids in canonical ascending order. Even generators may
// repeat, odd ones appear at most once.
struct Mono {
  std::vector<GenId> g;

  bool empty() const { return g.empty(); }
  std::size_t degree() const { return g.size(); }
  friend auto operator<=>(const Mono&, const Mono&) = default;
};

struct Grading {
  int gh = 0;
  int af = 0;
  int ta = 0;
  int parity = 0;
  friend bool operator==(const Grading&, const Grading&) = default;
};

enum class Side { Left, Right };

// Supercommutative polynomial in the model's generators with truncated
// series coefficients.
class Poly {
 public:
  Poly() = default;
  Poly(GenTablePtr tab, Window win) : tab_(std::move(tab)), win_(win) {}

  static Poly constant(GenTablePtr tab, Window win, const Coeff& c);
  static Poly constant(GenTablePtr tab, Window win, const Scalar& s);
  static Poly gen(GenTablePtr tab, Window win, GenId g);
  static Poly mono(GenTablePtr tab, Window win, const Mono& m, const Coeff& c);

  const GenTablePtr& table() const { return tab_; }
  const Window& window() const { return win_; }
  const std::map<Mono, Coeff>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(const Mono& m, const Coeff& c);

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  Poly operator-() const;
  friend bool operator==(const Poly& a, const Poly& b) {
    return a.terms_ == b.terms_ && a.win_ == b.win_;
  }

  Poly& scale(const Coeff& c);
  Poly& scale(const Scalar& s);

  int mono_parity(const Mono& m) const;
  // parity if homogeneous
  std::optional<int> parity() const;

  // smallest lam+tag order over all coefficients
  int min_insertion_order() const;

  Coeff coeff(const Mono& m) const;
  Rat norm1() const;

  std::string str() const;

  void check_compat(const Poly& o) const;

 private:
  GenTablePtr tab_;
  Window win_{};
  std::map<Mono, Coeff> terms_;
};

// canonical merge; returns false if the product vanishes (odd square)
bool mono_mul(const GenTable& tab, const Mono& a, const Mono& b, Mono& out, int& sign);

Poly poly_mul(const Poly& f, const Poly& g);

Poly derive(const Poly& f, GenId g, Side side);

// common grading of all monomials, or nullopt if mixed
std::optional<Grading> grading(const Poly& f);
Grading mono_grading(const GenTable& tab, const Mono& m);

// homomorphic graded substitution; generators absent from the map are kept
Poly substitute(const Poly& f, const std::map<GenId, Poly>& images);

std::set<std::uint32_t> support_of(const Poly& f);

// one addend of the site-local factorization
struct LocalTerm {
  std::vector<Poly> factors;  // each supported on a single cell
  Coeff coefficient;
};
std::vector<LocalTerm> local_decompose(const Poly& f);

// deterministic text form, one line per monomial: `coeff * gen gen ...`
std::string serialize(const Poly& f);

}  // namespace latbv
