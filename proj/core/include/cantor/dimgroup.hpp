#pragma once

// Dimension-group invariants: the rational eigenvalue subgroup through
// height divisibility, image subgroups of the trace, infinitesimal
// elements, and torsion of quotients of subgroups of R.

#include <optional>
#include <string>
#include <vector>

#include "cantor/lattice.hpp"
#include "cantor/measure.hpp"
#include "cantor/numberfield.hpp"
#include "cantor/tower.hpp"

namespace cantor {

// Finitely generated subgroup of (R, +) presented over a number field:
// generators as field elements, canonical lattice over the power basis.
class SubgroupOfR {
 public:
  // Requires 1 to be a member (unital subgroup).
  static SubgroupOfR from_elements(const FieldPtr& field,
                                   const std::vector<FieldElement>& gens);

  const FieldPtr& field() const { return field_; }
  const QLattice& lattice() const { return lattice_; }
  const std::vector<FieldElement>& generators() const { return gens_; }

  bool contains(const FieldElement& x) const;
  // Integer combination of the original generators realizing x, if any.
  std::optional<std::vector<Int>> combination(const FieldElement& x) const;

 private:
  FieldPtr field_;
  QLattice lattice_;
  IntMat gen_transform_;  // basis rows = gen_transform * generator rows
  std::vector<FieldElement> gens_;
};

struct RationalMembership {
  enum class Status { MemberAtLevel, CertifiedNonMember, UnknownUpTo };
  Status status = Status::UnknownUpTo;
  int level = 0;  // witness level, or the depth scanned
  // For CertifiedNonMember: pre-period and period of H_k mod q.
  int preperiod = 0, period = 0;
};

// Is p/q (coprime, q >= 1) in the rational eigenvalue subgroup, i.e. does
// q divide every entry of some H_k?  Scans k <= depth, continuing past the
// built levels when the matrix sequence has a known continuation; certifies
// non-membership when H_k mod q is eventually periodic with no zero vector
// in sight.
RationalMembership rational_member(const Tower& t, const Int& p, const Int& q, int depth);

// Image subgroup approximant at level n: generated by 1 and the mu_n(k).
// Requires a certified uniquely ergodic tower (exact measure).
SubgroupOfR image_group(const Tower& t, const ExactMeasure& mu, int n);

struct InfinitesimalReport {
  enum class Verdict { Trivial, NonTrivial };
  Verdict verdict = Verdict::Trivial;
  RatMat kernel_basis;             // basis of ker_Q(mu) in R^C
  std::optional<std::vector<Int>> witness;  // integer vector outside the
                                            // eventual kernel of B
};

// Triviality of the infinitesimal subgroup for a stationary primitive
// tower: Trivial iff every integer vector annihilated by mu is eventually
// killed by the incidence matrix (lies in ker B^C).
InfinitesimalReport infinitesimal_report(const Tower& t, const ExactMeasure& mu);

// Invariant factors and free rank of I/E; requires E a subgroup of I over
// the same field.
QuotientInvariants torsion_quotient(const SubgroupOfR& i, const SubgroupOfR& e);

}  // namespace cantor
