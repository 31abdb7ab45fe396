#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace latbv {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline std::string rat_str(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

// Gaussian rational: re + im*i, exact.
struct Scalar {
  Rat re{0};
  Rat im{0};

  Scalar() = default;
  Scalar(long v) : re(v) {}
  Scalar(const Rat& r) : re(r) {}
  Scalar(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

  static Scalar I() { return Scalar(Rat(0), Rat(1)); }

  bool is_zero() const { return re == 0 && im == 0; }
  Scalar conj() const { return Scalar(re, -im); }

  Scalar operator-() const { return Scalar(-re, -im); }
  Scalar& operator+=(const Scalar& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    return Scalar(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
  }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  Scalar inverse() const;

  // |re| + |im|; exact proxy for magnitude, used for defect norms.
  Rat norm1() const { return rat_abs(re) + rat_abs(im); }

  std::string str() const;
};

inline Scalar Scalar::inverse() const {
  Rat n = re * re + im * im;
  return Scalar(re / n, -im / n);
}

inline std::string Scalar::str() const {
  if (im == 0) return rat_str(re);
  std::string s;
  if (re != 0) s = rat_str(re) + (im > 0 ? "+" : "");
  if (im == 1)
    s += "i";
  else if (im == -1)
    s += "-i";
  else
    s += rat_str(im) + "i";
  return s;
}

}  // namespace latbv
