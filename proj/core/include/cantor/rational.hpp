#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace cantor {

using Int = mpz_class;
using Rat = mpq_class;

// Library-level failure: bad input, unmet precondition, unsupported shape.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw Error("rational with zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

// Accepts "p" and "p/q", arbitrary precision.
Rat rat_from_string(const std::string& s);

std::string to_string(const Int& z);
std::string to_string(const Rat& q);

inline int sign_of(const Rat& q) { return sgn(q); }
inline int sign_of(const Int& z) { return sgn(z); }

inline Int rat_floor(const Rat& q) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

inline Int rat_ceil(const Rat& q) {
  Int r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

// Nearest integer with the half-open convention: q - z in [-1/2, 1/2),
// so exact halves round up.
inline Int rat_round_half_up(const Rat& q) { return rat_floor(q + Rat(1, 2)); }

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

}  // namespace cantor
