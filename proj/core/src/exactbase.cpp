#include <cctype>

#include "cantor/dyadic.hpp"
#include "cantor/rational.hpp"

namespace cantor {

Rat rat_from_string(const std::string& s) {
  std::string t;
  t.reserve(s.size());
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  if (!t.empty() && t[0] == '+') t.erase(t.begin());
  if (t.empty()) throw Error("empty rational literal");
  for (size_t i = 0; i < t.size(); ++i) {
    char c = t[i];
    bool ok = std::isdigit(static_cast<unsigned char>(c)) || c == '/' ||
              (c == '-' && (i == 0 || t[i - 1] == '/'));
    if (!ok) throw Error("bad rational literal: " + s);
  }
  mpq_class q;
  if (q.set_str(t, 10) != 0) throw Error("bad rational literal: " + s);
  if (q.get_den() == 0) throw Error("rational with zero denominator: " + s);
  q.canonicalize();
  return q;
}

std::string to_string(const Int& z) { return z.get_str(); }

std::string to_string(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

void Dyadic::normalize() {
  if (mant_ == 0) {
    exp2_ = 0;
    return;
  }
  Int a = ::abs(mant_);
  mp_bitcnt_t k = mpz_scan1(a.get_mpz_t(), 0);
  if (k > 0) {
    mpz_tdiv_q_2exp(mant_.get_mpz_t(), mant_.get_mpz_t(), k);
    exp2_ += long(k);
  }
}

Dyadic Dyadic::from_rat_down(const Rat& q, long prec_bits) {
  if (prec_bits < 0) prec_bits = 0;
  Int num = q.get_num();
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), prec_bits);
  Int m;
  mpz_fdiv_q(m.get_mpz_t(), num.get_mpz_t(), q.get_den().get_mpz_t());
  return Dyadic(m, -prec_bits);
}

Dyadic Dyadic::from_rat_up(const Rat& q, long prec_bits) {
  if (prec_bits < 0) prec_bits = 0;
  Int num = q.get_num();
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), prec_bits);
  Int m;
  mpz_cdiv_q(m.get_mpz_t(), num.get_mpz_t(), q.get_den().get_mpz_t());
  return Dyadic(m, -prec_bits);
}

Rat Dyadic::to_rat() const {
  Rat r(mant_);
  if (exp2_ >= 0)
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), exp2_);
  else
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), -exp2_);
  return r;
}

int Dyadic::cmp(const Dyadic& a, const Dyadic& b) {
  int sa = a.sign(), sb = b.sign();
  if (sa != sb) return sa < sb ? -1 : 1;
  long e = std::min(a.exp2_, b.exp2_);
  Int am = a.mant_, bm = b.mant_;
  mpz_mul_2exp(am.get_mpz_t(), am.get_mpz_t(), a.exp2_ - e);
  mpz_mul_2exp(bm.get_mpz_t(), bm.get_mpz_t(), b.exp2_ - e);
  return ::cmp(am, bm) < 0 ? -1 : (am == bm ? 0 : 1);
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  long e = std::min(a.exp2_, b.exp2_);
  Int am = a.mant_, bm = b.mant_;
  mpz_mul_2exp(am.get_mpz_t(), am.get_mpz_t(), a.exp2_ - e);
  mpz_mul_2exp(bm.get_mpz_t(), bm.get_mpz_t(), b.exp2_ - e);
  return Dyadic(am + bm, e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
  return Dyadic(a.mant_ * b.mant_, a.exp2_ + b.exp2_);
}

Interval operator*(const Interval& a, const Interval& b) {
  Dyadic p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  Dyadic lo = std::min(std::min(p1, p2), std::min(p3, p4));
  Dyadic hi = std::max(std::max(p1, p2), std::max(p3, p4));
  return Interval(lo, hi);
}

}  // namespace cantor
