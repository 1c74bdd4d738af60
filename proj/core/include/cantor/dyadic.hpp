#pragma once

// Dyadic rationals m * 2^e and closed interval arithmetic over them.
// Dyadics are closed under ring operations, so interval endpoints stay
// exact; rounding happens only when importing a general rational.

#include <algorithm>
#include <string>

#include "cantor/rational.hpp"

namespace cantor {

class Dyadic {
 public:
  Dyadic() : mant_(0), exp2_(0) {}
  explicit Dyadic(const Int& z) : mant_(z), exp2_(0) { normalize(); }
  Dyadic(Int mant, long exp2) : mant_(std::move(mant)), exp2_(exp2) { normalize(); }

  // Largest dyadic with denominator 2^prec_bits that is <= q (resp. smallest >= q).
  static Dyadic from_rat_down(const Rat& q, long prec_bits);
  static Dyadic from_rat_up(const Rat& q, long prec_bits);

  const Int& mantissa() const { return mant_; }
  long exponent() const { return exp2_; }
  bool is_zero() const { return mant_ == 0; }
  int sign() const { return sgn(mant_); }

  Rat to_rat() const;
  std::string str() const { return to_string(to_rat()); }

  Dyadic operator-() const { return Dyadic(Int(-mant_), exp2_); }
  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);

  friend bool operator==(const Dyadic& a, const Dyadic& b) { return cmp(a, b) == 0; }
  friend bool operator!=(const Dyadic& a, const Dyadic& b) { return cmp(a, b) != 0; }
  friend bool operator<(const Dyadic& a, const Dyadic& b) { return cmp(a, b) < 0; }
  friend bool operator<=(const Dyadic& a, const Dyadic& b) { return cmp(a, b) <= 0; }
  friend bool operator>(const Dyadic& a, const Dyadic& b) { return cmp(a, b) > 0; }
  friend bool operator>=(const Dyadic& a, const Dyadic& b) { return cmp(a, b) >= 0; }

  static int cmp(const Dyadic& a, const Dyadic& b);

 private:
  void normalize();

  Int mant_;
  long exp2_;
};

inline Dyadic abs(const Dyadic& d) { return d.sign() < 0 ? -d : d; }

// Closed interval [lo, hi] with dyadic endpoints.
struct Interval {
  Dyadic lo, hi;

  Interval() = default;
  Interval(Dyadic l, Dyadic h) : lo(std::move(l)), hi(std::move(h)) {
    if (hi < lo) throw Error("interval endpoints out of order");
  }
  static Interval point(const Dyadic& d) { return Interval(d, d); }
  // Outward-rounded enclosure of [a, b] at the given precision.
  static Interval enclose(const Rat& a, const Rat& b, long prec_bits) {
    return Interval(Dyadic::from_rat_down(a, prec_bits), Dyadic::from_rat_up(b, prec_bits));
  }

  Dyadic width() const { return hi - lo; }
  bool contains_zero() const { return lo.sign() <= 0 && hi.sign() >= 0; }
  bool contains(const Rat& q) const { return lo.to_rat() <= q && q <= hi.to_rat(); }

  Interval operator-() const { return Interval(-hi, -lo); }
  friend Interval operator+(const Interval& a, const Interval& b) {
    return Interval(a.lo + b.lo, a.hi + b.hi);
  }
  friend Interval operator-(const Interval& a, const Interval& b) {
    return Interval(a.lo - b.hi, a.hi - b.lo);
  }
  friend Interval operator*(const Interval& a, const Interval& b);

  static Interval hull(const Interval& a, const Interval& b) {
    return Interval(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
  }
};

}  // namespace cantor
