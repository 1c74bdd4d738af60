#pragma once

// Finitely generated subgroups of Z^d and Q^d: Hermite and Smith normal
// forms with unimodular transforms, membership, and quotient invariants.
//
// HNF convention: rows generate; the canonical basis is in row echelon
// form with positive pivots, entries above a pivot reduced into [0, pivot),
// and deterministic pivoting (smallest magnitude first, ties by position).

#include <optional>
#include <vector>

#include "cantor/intmat.hpp"

namespace cantor {

struct HnfResult {
  IntMat basis;      // r x d, independent rows
  IntMat transform;  // rows of `basis` = transform * input rows (r x n)
};
HnfResult hnf(const IntMat& a);

struct SnfResult {
  std::vector<Int> factors;  // diagonal, divisibility chain, nonnegative
  IntMat left, right;        // unimodular, left * a * right = diag(factors)
  int rank;                  // number of nonzero factors
};
SnfResult snf(const IntMat& a);

// Subgroup of Q^d given by rational generators: cleared to a common
// denominator and held as denominator + canonical integer HNF basis.
class QLattice {
 public:
  static QLattice from_generators(const RatMat& gens);

  int ambient() const { return ambient_; }
  int rank() const { return basis_.rows(); }
  const Int& denominator() const { return denom_; }
  const IntMat& int_basis() const { return basis_; }
  // Basis rows as rationals (int_basis / denominator).
  RatMat basis() const;

  // Coefficients expressing x over the canonical basis, nullopt if x is
  // not in the lattice.
  std::optional<std::vector<Int>> member(const std::vector<Rat>& x) const;
  bool contains(const QLattice& other) const;
  friend bool operator==(const QLattice& a, const QLattice& b) {
    return a.ambient_ == b.ambient_ && a.denom_ == b.denom_ && a.basis_ == b.basis_;
  }

 private:
  int ambient_ = 0;
  Int denom_ = 1;
  IntMat basis_;  // HNF, rows independent
};

struct QuotientInvariants {
  std::vector<Int> factors;  // invariant factors of the torsion part (1s kept)
  int free_rank = 0;
};
// Invariants of I / E for E a finite-index-or-smaller subgroup of I;
// throws if E is not contained in I.
QuotientInvariants quotient_invariants(const QLattice& e, const QLattice& i);

}  // namespace cantor
