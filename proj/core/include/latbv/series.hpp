#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "latbv/rational.hpp"
#include "latbv/util.hpp"

namespace latbv {

// Truncation parameters for the coefficient ring: formal power series in the
// coupling, a bounded Laurent window in hbar, and up to two nilpotent
// directional tags (tag^2 = 0) used for exact first derivatives along an
// inserted functional.
struct Window {
  int lambda_max = 2;
  int hbar_min = -2;
  int hbar_max = 2;
  int tag_max0 = 0;
  int tag_max1 = 0;

  friend bool operator==(const Window&, const Window&) = default;

  // Window sized so that every admissible exponent (k >= -(m + tags)) fits.
  static Window standard(int lambda_max, int tags = 0, int hbar_headroom = 2) {
    Window w;
    w.lambda_max = lambda_max;
    w.hbar_min = -(lambda_max + tags);
    w.hbar_max = lambda_max + tags + hbar_headroom;
    w.tag_max0 = tags > 0 ? 1 : 0;
    w.tag_max1 = tags > 1 ? 1 : 0;
    return w;
  }
};

struct SeriesExp {
  std::int16_t lam = 0;
  std::int16_t hbar = 0;
  std::int8_t tag0 = 0;
  std::int8_t tag1 = 0;

  friend auto operator<=>(const SeriesExp&, const SeriesExp&) = default;
  int insertion_order() const { return lam + tag0 + tag1; }
};

// Exact truncated series: finite map exponent -> Gaussian rational.
// Invariants: stored exponents lie inside the window, the scalar is nonzero,
// and hbar >= -(lam + tags) (inverse powers of hbar only come with insertions).
class Coeff {
 public:
  Coeff() = default;
  explicit Coeff(Window w) : win_(w) {}
  Coeff(Window w, const Scalar& s) : win_(w) {
    if (!s.is_zero()) terms_[SeriesExp{}] = s;
  }

  static Coeff unit(Window w) { return Coeff(w, Scalar(1)); }
  static Coeff monomial(Window w, const Scalar& s, int lam, int hbar, int tag0 = 0, int tag1 = 0);

  const Window& window() const { return win_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<SeriesExp, Scalar>& terms() const { return terms_; }

  // smallest insertion order (lam + tags) over stored terms; large if zero
  int min_insertion_order() const;

  void add_term(const SeriesExp& e, const Scalar& s);

  Coeff& operator+=(const Coeff& o);
  Coeff& operator-=(const Coeff& o);
  friend Coeff operator+(Coeff a, const Coeff& b) { return a += b; }
  friend Coeff operator-(Coeff a, const Coeff& b) { return a -= b; }
  Coeff operator-() const;
  friend Coeff operator*(const Coeff& a, const Coeff& b);
  Coeff& operator*=(const Coeff& o) { return *this = *this * o; }
  friend bool operator==(const Coeff& a, const Coeff& b) {
    return a.win_ == b.win_ && a.terms_ == b.terms_;
  }

  Coeff& scale(const Scalar& s);
  Coeff& scale_rat(const Rat& r) { return scale(Scalar(r)); }

  // termwise exponent shift with scalar factor; raises LaurentOverflow if a
  // shifted term would need more inverse hbar than its insertion order allows
  Coeff shifted(int dlam, int dhbar, const Scalar& mult) const;

  // multiplicative inverse; requires an invertible (lam=0, hbar=0, no-tag) part
  Coeff inverse() const;

  Scalar project(int lam, int hbar, int tag0 = 0, int tag1 = 0) const;

  // coefficient of tag_idx^1, reindexed to the tagless window slot
  Coeff tag_part(int tag_idx) const;
  // terms with no tags
  Coeff untagged() const;

  Rat norm1() const;
  std::string str() const;

  // process-wide count of terms discarded by window truncation
  static std::uint64_t truncation_tally();
  static void reset_truncation_tally();

 private:
  bool inside(const SeriesExp& e) const;
  void check_window(const Coeff& o) const;

  Window win_{};
  std::map<SeriesExp, Scalar> terms_;
};

}  // namespace latbv
