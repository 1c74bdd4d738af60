#pragma once

// Real algebraic number fields Q(theta) in power-basis form.  A field is a
// monic irreducible integer minimal polynomial together with a rational
// interval isolating one real root; elements are rational coordinate
// vectors against 1, theta, ..., theta^{d-1}.  All arithmetic is exact;
// sign decisions refine the root interval until they are certified.

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cantor/dyadic.hpp"
#include "cantor/polynomial.hpp"
#include "cantor/rational.hpp"

namespace cantor {

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

class NumberField : public std::enable_shared_from_this<NumberField> {
 public:
  // Degree-1 output collapses to Q regardless of the root.
  static FieldPtr create(IPoly minpoly, Rat root_lo, Rat root_hi,
                         bool assume_irreducible = false);
  static FieldPtr rationals();
  // Canonical presentation of Q(sqrt(d)), d > 0 and not a square: minimal
  // polynomial x^2 - f with f the squarefree part, root the positive one.
  static FieldPtr sqrt_field(const Int& d);

  int degree() const { return degree_; }
  bool is_rational() const { return degree_ == 1; }
  const IPoly& minpoly() const { return minpoly_; }

  // Snapshot of the current root enclosure (monotonically refined).
  std::pair<Rat, Rat> root_interval() const;
  // Refine until hi - lo <= width; returns the refined snapshot.
  std::pair<Rat, Rat> refine_root(const Rat& width) const;
  // Creation-time isolating interval.  Immutable, so serializations that
  // quote it do not depend on how far the root has been refined.
  std::pair<Rat, Rat> isolating_interval() const { return {iso_lo_, iso_hi_}; }

  std::string describe() const;

 private:
  NumberField() = default;

  int degree_ = 1;
  IPoly minpoly_;
  Rat iso_lo_, iso_hi_;
  mutable std::mutex mu_;
  mutable Rat root_lo_, root_hi_;

  friend bool same_field(const NumberField& a, const NumberField& b);
};

bool same_field(const NumberField& a, const NumberField& b);
inline bool same_field(const FieldPtr& a, const FieldPtr& b) { return same_field(*a, *b); }

class FieldElement {
 public:
  FieldElement() : FieldElement(Rat(0)) {}
  explicit FieldElement(const Rat& q);
  explicit FieldElement(const Int& z) : FieldElement(Rat(z)) {}
  FieldElement(FieldPtr field, std::vector<Rat> coords);

  static FieldElement zero(const FieldPtr& f);
  static FieldElement one(const FieldPtr& f);
  static FieldElement theta(const FieldPtr& f);  // degree >= 2

  const FieldPtr& field() const { return field_; }
  const std::vector<Rat>& coords() const { return coords_; }

  bool is_zero() const;
  // True when the value lies in Q (all theta-coordinates vanish).
  bool is_rational() const;
  Rat as_rat() const;  // throws unless is_rational()

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
  FieldElement operator-() const;
  friend bool operator==(const FieldElement& a, const FieldElement& b);
  friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

  // Certified sign: exact zero test first, then interval refinement.
  int sign() const;
  FieldElement abs() const { return sign() < 0 ? -(*this) : *this; }

  // Dyadic enclosure of width <= 2^-prec_bits.
  Interval enclosure(long prec_bits) const;

  // z nearest to the value with value - z in [-1/2, 1/2); exact halves
  // round up.  Returns (z, fractional part).
  std::pair<Int, FieldElement> nearest_integer_split() const;

  std::string str() const;

 private:
  FieldPtr field_;
  std::vector<Rat> coords_;
};

// Exact comparison helpers via certified signs.
inline bool elem_less(const FieldElement& a, const FieldElement& b) {
  return (a - b).sign() < 0;
}

// Lift onto a common field.  Rational values embed into any field;
// distinct canonical quadratic fields are recognized as incompatible.
struct Joined {
  FieldElement a, b;
};
Joined join(const FieldElement& a, const FieldElement& b);
// Embedding of x into f when representable there, nullopt when certifiably
// not (rational x into any f; x already over f; non-rational x into a
// different canonical quadratic field).  Throws when undecidable.
std::optional<FieldElement> try_embed(const FieldElement& x, const FieldPtr& f);

// Expression grammar: "p/q" | "(a+b*sqrt(d))/c" (tolerant variants: bare
// "sqrt(d)", "a+b*sqrt(d)", leading sign) | "coords:[c0,c1,...]@<minpoly>"
// with the minimal polynomial in "x^2-5" form, root taken to be the
// largest real one.
FieldElement parse_real(const std::string& text);

}  // namespace cantor
