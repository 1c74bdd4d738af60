#pragma once

// Dense univariate polynomials, coefficients low-to-high.  Integer
// polynomials carry the field/minimal-polynomial plumbing: Sturm chains,
// real root isolation, and the small-degree factor searches used to pull
// an irreducible factor out of a characteristic polynomial.

#include <optional>
#include <utility>
#include <vector>

#include "cantor/rational.hpp"

namespace cantor {

using IPoly = std::vector<Int>;  // implicit zero when empty
using QPoly = std::vector<Rat>;

int degree(const IPoly& p);  // -1 for the zero polynomial
int degree(const QPoly& p);
void normalize(IPoly& p);
void normalize(QPoly& p);

QPoly to_qpoly(const IPoly& p);
bool is_monic(const IPoly& p);

Rat eval(const IPoly& p, const Rat& x);
Rat eval(const QPoly& p, const Rat& x);
IPoly derivative(const IPoly& p);

QPoly qp_add(const QPoly& a, const QPoly& b);
QPoly qp_sub(const QPoly& a, const QPoly& b);
QPoly qp_mul(const QPoly& a, const QPoly& b);
// Euclidean division, divisor nonzero.
std::pair<QPoly, QPoly> qp_divrem(const QPoly& a, const QPoly& b);
QPoly qp_monic(const QPoly& a);
QPoly qp_gcd(const QPoly& a, const QPoly& b);

// Extended gcd: g = s*a + t*b with g monic (or zero).
struct QPolyExtGcd {
  QPoly g, s, t;
};
QPolyExtGcd qp_ext_gcd(const QPoly& a, const QPoly& b);

IPoly ipoly_mul(const IPoly& a, const IPoly& b);
// Exact division of monic-divisor integer polynomials; nullopt if not exact.
std::optional<IPoly> ipoly_div_exact(const IPoly& a, const IPoly& b);

// p / gcd(p, p'), monic integer output (content stripped).
IPoly squarefree_part(const IPoly& p);

// Number of distinct real roots of squarefree p in (a, b].
struct SturmChain {
  std::vector<QPoly> seq;
  static SturmChain build(const IPoly& p);
  int variations(const Rat& x) const;
  int count_roots(const Rat& a, const Rat& b) const;  // in (a, b]
};

// 1 + max |a_i| / |lead|; all real roots lie in (-B, B).
Rat cauchy_bound(const IPoly& p);

// Isolating interval (lo, hi] for the largest real root of squarefree p;
// throws if p has no real root.
std::pair<Rat, Rat> isolate_largest_real_root(const IPoly& p);

// Bisect an isolating interval once, keeping the root inside.
std::pair<Rat, Rat> bisect_root_interval(const IPoly& p, const Rat& lo, const Rat& hi);

// True if the interval (lo, hi] isolates exactly one root of squarefree p.
bool isolates_one_root(const IPoly& p, const Rat& lo, const Rat& hi);

// Irreducibility over Q for monic integer polynomials of degree <= 4:
// rational-root and quadratic-split checks.  Degrees above the supported
// bound throw.
bool irreducible_le4(const IPoly& p);

// Monic irreducible factor of p having a root in the isolating interval
// (lo, hi].  Supports factor degree <= maxdeg (<= 4).  Returns the factor
// and a refined interval isolating that root among the factor's roots.
struct RootFactor {
  IPoly minpoly;
  Rat lo, hi;
};
RootFactor minimal_polynomial_of_root(const IPoly& p, Rat lo, Rat hi, int maxdeg);

// d = s^2 * f with f squarefree; returns (s, f).  Trial division; inputs
// beyond the trial bound are returned unreduced (still correct, just not
// canonical).
std::pair<Int, Int> squarefree_decompose(const Int& d);

// Parse "x^2-5", "x^3 - x - 1", "x-1", ... into a monic integer polynomial.
IPoly poly_from_string(const std::string& s);
std::string poly_to_string(const IPoly& p);

}  // namespace cantor
