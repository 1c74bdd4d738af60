#include "cantor/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace cantor {

int degree(const IPoly& p) {
  int d = int(p.size()) - 1;
  while (d >= 0 && p[d] == 0) --d;
  return d;
}

int degree(const QPoly& p) {
  int d = int(p.size()) - 1;
  while (d >= 0 && p[d] == 0) --d;
  return d;
}

void normalize(IPoly& p) { p.resize(size_t(degree(p) + 1)); }
void normalize(QPoly& p) { p.resize(size_t(degree(p) + 1)); }

QPoly to_qpoly(const IPoly& p) {
  QPoly q(p.size());
  for (size_t i = 0; i < p.size(); ++i) q[i] = Rat(p[i]);
  normalize(q);
  return q;
}

bool is_monic(const IPoly& p) {
  int d = degree(p);
  return d >= 0 && p[size_t(d)] == 1;
}

Rat eval(const IPoly& p, const Rat& x) {
  Rat acc = 0;
  for (size_t i = p.size(); i-- > 0;) acc = acc * x + Rat(p[i]);
  return acc;
}

Rat eval(const QPoly& p, const Rat& x) {
  Rat acc = 0;
  for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

IPoly derivative(const IPoly& p) {
  IPoly d;
  for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * long(i));
  normalize(d);
  return d;
}

QPoly qp_add(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()), Rat(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  normalize(r);
  return r;
}

QPoly qp_sub(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()), Rat(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  normalize(r);
  return r;
}

QPoly qp_mul(const QPoly& a, const QPoly& b) {
  if (degree(a) < 0 || degree(b) < 0) return {};
  QPoly r(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  normalize(r);
  return r;
}

std::pair<QPoly, QPoly> qp_divrem(const QPoly& a, const QPoly& b) {
  int db = degree(b);
  if (db < 0) throw Error("polynomial division by zero");
  QPoly rem = a;
  normalize(rem);
  QPoly quo;
  int dr = degree(rem);
  if (dr >= db) quo.assign(size_t(dr - db + 1), Rat(0));
  while ((dr = degree(rem)) >= db) {
    Rat c = rem[size_t(dr)] / b[size_t(db)];
    quo[size_t(dr - db)] = c;
    for (int i = 0; i <= db; ++i) rem[size_t(dr - db + i)] -= c * b[size_t(i)];
    normalize(rem);
  }
  normalize(quo);
  return {quo, rem};
}

QPoly qp_monic(const QPoly& a) {
  int d = degree(a);
  if (d < 0) return a;
  QPoly r = a;
  Rat lead = r[size_t(d)];
  for (auto& c : r) c /= lead;
  return r;
}

QPoly qp_gcd(const QPoly& a, const QPoly& b) {
  QPoly x = a, y = b;
  normalize(x);
  normalize(y);
  while (degree(y) >= 0) {
    QPoly r = qp_divrem(x, y).second;
    x = y;
    y = r;
  }
  return qp_monic(x);
}

QPolyExtGcd qp_ext_gcd(const QPoly& a, const QPoly& b) {
  QPoly r0 = a, r1 = b;
  QPoly s0 = {Rat(1)}, s1 = {};
  QPoly t0 = {}, t1 = {Rat(1)};
  normalize(r0);
  normalize(r1);
  while (degree(r1) >= 0) {
    auto [q, r2] = qp_divrem(r0, r1);
    QPoly s2 = qp_sub(s0, qp_mul(q, s1));
    QPoly t2 = qp_sub(t0, qp_mul(q, t1));
    r0 = r1; r1 = r2;
    s0 = s1; s1 = s2;
    t0 = t1; t1 = t2;
  }
  int d = degree(r0);
  if (d >= 0) {
    Rat lead = r0[size_t(d)];
    for (auto& c : r0) c /= lead;
    for (auto& c : s0) c /= lead;
    for (auto& c : t0) c /= lead;
  }
  return {r0, s0, t0};
}

IPoly ipoly_mul(const IPoly& a, const IPoly& b) {
  if (degree(a) < 0 || degree(b) < 0) return {};
  IPoly r(a.size() + b.size() - 1, Int(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  normalize(r);
  return r;
}

std::optional<IPoly> ipoly_div_exact(const IPoly& a, const IPoly& b) {
  if (!is_monic(b)) throw Error("exact division requires a monic divisor");
  IPoly rem = a;
  normalize(rem);
  int db = degree(b);
  int dr = degree(rem);
  if (dr < db) return dr < 0 ? std::optional<IPoly>(IPoly{}) : std::nullopt;
  IPoly quo(size_t(dr - db + 1), Int(0));
  while ((dr = degree(rem)) >= db) {
    Int c = rem[size_t(dr)];
    quo[size_t(dr - db)] = c;
    for (int i = 0; i <= db; ++i) rem[size_t(dr - db + i)] -= c * b[size_t(i)];
    normalize(rem);
  }
  if (degree(rem) >= 0) return std::nullopt;
  return quo;
}

namespace {

// Monic integer polynomial proportional to q (content cleared).
IPoly qpoly_to_monic_ipoly(const QPoly& q) {
  QPoly m = qp_monic(q);
  Int den = 1;
  for (const auto& c : m) den = lcm(den, c.get_den());
  IPoly r(m.size());
  for (size_t i = 0; i < m.size(); ++i) {
    Rat scaled = m[i] * Rat(den);
    r[i] = scaled.get_num();
  }
  // Result of a monic rational polynomial with integral scaling: leading
  // coefficient equals den; divide back out only when den == 1 fails.
  if (den != 1) {
    // Keep monic over Q: store as primitive with positive leading term.
    Int g = 0;
    for (const auto& c : r) g = gcd(g, c);
    if (g != 0)
      for (auto& c : r) c /= g;
  }
  return r;
}

}  // namespace

IPoly squarefree_part(const IPoly& p) {
  int d = degree(p);
  if (d <= 0) throw Error("squarefree part of a constant");
  QPoly q = to_qpoly(p);
  QPoly g = qp_gcd(q, to_qpoly(derivative(p)));
  QPoly sf = qp_divrem(q, g).first;
  IPoly r = qpoly_to_monic_ipoly(sf);
  if (!is_monic(r)) throw Error("squarefree part not monic");
  return r;
}

SturmChain SturmChain::build(const IPoly& p) {
  SturmChain c;
  QPoly p0 = to_qpoly(p);
  QPoly p1 = to_qpoly(derivative(p));
  c.seq.push_back(p0);
  if (degree(p1) >= 0) c.seq.push_back(p1);
  while (c.seq.size() >= 2) {
    const QPoly& a = c.seq[c.seq.size() - 2];
    const QPoly& b = c.seq[c.seq.size() - 1];
    QPoly r = qp_divrem(a, b).second;
    if (degree(r) < 0) break;
    for (auto& x : r) x = -x;
    c.seq.push_back(r);
  }
  return c;
}

int SturmChain::variations(const Rat& x) const {
  int v = 0, prev = 0;
  for (const auto& p : seq) {
    int s = sign_of(eval(p, x));
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++v;
    prev = s;
  }
  return v;
}

int SturmChain::count_roots(const Rat& a, const Rat& b) const {
  if (b < a) throw Error("root count on an empty interval");
  return variations(a) - variations(b);
}

Rat cauchy_bound(const IPoly& p) {
  int d = degree(p);
  if (d < 0) throw Error("root bound of the zero polynomial");
  Rat lead = Rat(p[size_t(d)]);
  Rat mx = 0;
  for (int i = 0; i < d; ++i) {
    Rat c = rat_abs(Rat(p[size_t(i)]) / lead);
    if (c > mx) mx = c;
  }
  return mx + 1;
}

std::pair<Rat, Rat> isolate_largest_real_root(const IPoly& p) {
  SturmChain chain = SturmChain::build(p);
  Rat bound = cauchy_bound(p);
  Rat lo = -bound, hi = bound;
  if (chain.count_roots(lo, hi) < 1) throw Error("polynomial has no real root");
  // Shrink from the left until exactly one root remains in (lo, hi].
  while (chain.count_roots(lo, hi) > 1) {
    Rat mid = (lo + hi) / 2;
    if (chain.count_roots(mid, hi) >= 1)
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi};
}

std::pair<Rat, Rat> bisect_root_interval(const IPoly& p, const Rat& lo, const Rat& hi) {
  Rat mid = (lo + hi) / 2;
  int smid = sign_of(eval(p, mid));
  if (smid == 0) {
    // Rational root: nudge the bracket to keep the root inside (lo', hi'].
    return {lo, mid};
  }
  int shi = sign_of(eval(p, hi));
  if (shi == 0 || smid != shi) return {mid, hi};
  return {lo, mid};
}

bool isolates_one_root(const IPoly& p, const Rat& lo, const Rat& hi) {
  return SturmChain::build(p).count_roots(lo, hi) == 1;
}

namespace {

std::vector<Int> divisors_with_sign(const Int& n) {
  std::vector<Int> ds;
  Int a = ::abs(n);
  if (a == 0) return ds;
  for (Int d = 1; d * d <= a; ++d) {
    if (a % d == 0) {
      ds.push_back(d);
      if (d * d != a) ds.push_back(a / d);
    }
  }
  std::sort(ds.begin(), ds.end());
  std::vector<Int> out;
  for (const auto& d : ds) {
    out.push_back(d);
    out.push_back(-d);
  }
  return out;
}

std::vector<Int> integer_roots(const IPoly& p) {
  // Monic input: rational roots are integers dividing the constant term.
  std::vector<Int> roots;
  IPoly q = p;
  normalize(q);
  if (degree(q) < 1) return roots;
  if (q[0] == 0) {
    roots.push_back(0);
    return roots;
  }
  for (const auto& r : divisors_with_sign(q[0]))
    if (eval(q, Rat(r)) == 0) roots.push_back(r);
  std::sort(roots.begin(), roots.end());
  return roots;
}

// Monic quadratic factors x^2 + a x + b of a monic integer polynomial,
// found by divisor enumeration of the constant term plus exact division.
std::vector<IPoly> monic_quadratic_factors(const IPoly& p) {
  std::vector<IPoly> out;
  int d = degree(p);
  if (d < 4 || p[0] == 0) return out;
  // |a| <= 2 * root bound keeps the search finite and exact.
  Rat rb = cauchy_bound(p);
  Int amax = rat_ceil(rb * 2);
  for (const auto& b : divisors_with_sign(p[0])) {
    for (Int a = -amax; a <= amax; ++a) {
      IPoly q = {b, a, Int(1)};
      auto quo = ipoly_div_exact(p, q);
      if (quo) out.push_back(q);
    }
  }
  return out;
}

}  // namespace

bool irreducible_le4(const IPoly& p) {
  int d = degree(p);
  if (d < 1) return false;
  if (!is_monic(p)) throw Error("irreducibility check requires a monic polynomial");
  if (d == 1) return true;
  if (d > 4) throw Error("irreducibility check limited to degree <= 4");
  if (!integer_roots(p).empty()) return false;
  if (d <= 3) return true;
  // Degree 4 without rational roots: reducible only as quadratic*quadratic.
  IPoly probe = p;
  if (probe[0] == 0) return false;  // root 0 would have been caught
  return monic_quadratic_factors(probe).empty();
}

RootFactor minimal_polynomial_of_root(const IPoly& p, Rat lo, Rat hi, int maxdeg) {
  if (maxdeg > 4) maxdeg = 4;
  IPoly sf = squarefree_part(p);
  if (!isolates_one_root(sf, lo, hi))
    throw Error("interval does not isolate a single root");

  auto select = [&](const IPoly& factor) -> std::optional<RootFactor> {
    // Refine until the interval contains a root of exactly one of factor,
    // cofactor; squarefree parent keeps the split clean.
    Rat a = lo, b = hi;
    SturmChain cf = SturmChain::build(factor);
    for (int iter = 0; iter < 4096; ++iter) {
      int inside = cf.count_roots(a, b);
      if (inside == 0) return std::nullopt;
      if (inside == 1 && isolates_one_root(sf, a, b)) {
        // The single sf-root in (a,b] is a root of `factor`.
        return RootFactor{factor, a, b};
      }
      std::tie(a, b) = bisect_root_interval(sf, a, b);
    }
    throw Error("root separation failed");
  };

  // Degree 1: integer roots.
  for (const auto& r : integer_roots(sf)) {
    if (Rat(r) > lo && Rat(r) <= hi) {
      IPoly lin = {-r, Int(1)};
      if (auto got = select(lin)) return *got;
    }
  }

  IPoly rest = sf;
  for (const auto& r : integer_roots(sf)) {
    IPoly lin = {-r, Int(1)};
    if (auto q = ipoly_div_exact(rest, lin)) rest = *q;
  }
  int drest = degree(rest);
  if (drest == 0) throw Error("no factor of bounded degree contains the root");

  if (drest <= maxdeg && drest <= 4) {
    if (drest <= 3 || irreducible_le4(rest)) {
      if (auto got = select(rest)) return *got;
      throw Error("root lost while factoring");
    }
    // Reducible quartic: split into quadratics.
    for (const auto& q2 : monic_quadratic_factors(rest)) {
      if (auto got = select(q2)) return *got;
      auto co = ipoly_div_exact(rest, q2);
      if (co && degree(*co) == 2) {
        if (auto got = select(*co)) return *got;
      }
    }
    throw Error("root lost while factoring");
  }

  if (maxdeg >= 2) {
    for (const auto& q2 : monic_quadratic_factors(rest)) {
      if (auto got = select(q2)) return *got;
    }
  }
  throw Error("minimal polynomial degree exceeds the supported bound");
}

std::pair<Int, Int> squarefree_decompose(const Int& d) {
  if (d <= 0) throw Error("squarefree decomposition needs a positive integer");
  Int s = 1, f = 1, rest = d;
  const long kTrialBound = 1000000;
  for (long p = 2; Int(p) * p <= rest && p <= kTrialBound; p = (p == 2 ? 3 : p + 2)) {
    if (rest % p != 0) continue;
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) s *= p;
    if (e % 2) f *= p;
  }
  // Whatever survived trial division is either 1, a prime, or a large
  // composite we leave unreduced; check for a perfect square first.
  if (rest > 1) {
    Int r = sqrt(rest);
    if (r * r == rest)
      s *= r;
    else
      f *= rest;
  }
  return {s, f};
}

IPoly poly_from_string(const std::string& s) {
  // Terms: [+-] [coef] [* ] [x [^ k]]
  struct Term {
    Int coef;
    int pow;
  };
  std::vector<Term> terms;
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  skip_ws();
  bool first = true;
  while (i < s.size()) {
    int sign = 1;
    skip_ws();
    if (s[i] == '+' || s[i] == '-') {
      if (s[i] == '-') sign = -1;
      ++i;
      skip_ws();
    } else if (!first) {
      throw Error("bad polynomial: missing operator in " + s);
    }
    first = false;
    std::string digits;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits.push_back(s[i++]);
    skip_ws();
    if (i < s.size() && s[i] == '*') {
      ++i;
      skip_ws();
    }
    int pw = 0;
    if (i < s.size() && (s[i] == 'x' || s[i] == 'X')) {
      ++i;
      pw = 1;
      skip_ws();
      if (i < s.size() && s[i] == '^') {
        ++i;
        skip_ws();
        std::string pd;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) pd.push_back(s[i++]);
        if (pd.empty()) throw Error("bad polynomial exponent in " + s);
        pw = std::stoi(pd);
      }
    }
    if (digits.empty() && pw == 0) throw Error("bad polynomial term in " + s);
    Int c = digits.empty() ? Int(1) : Int(digits);
    terms.push_back({c * sign, pw});
    skip_ws();
  }
  if (terms.empty()) throw Error("empty polynomial: " + s);
  int dmax = 0;
  for (const auto& t : terms) dmax = std::max(dmax, t.pow);
  IPoly p(size_t(dmax) + 1, Int(0));
  for (const auto& t : terms) p[size_t(t.pow)] += t.coef;
  normalize(p);
  return p;
}

std::string poly_to_string(const IPoly& p) {
  int d = degree(p);
  if (d < 0) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = d; i >= 0; --i) {
    const Int& c = p[size_t(i)];
    if (c == 0) continue;
    Int a = ::abs(c);
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (i == 0 || a != 1) os << a.get_str();
    if (i >= 1) {
      if (a != 1) os << "*";
      os << "x";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

}  // namespace cantor
