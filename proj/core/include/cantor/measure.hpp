#pragma once

// Invariant measures of a tower sequence, as the vectors mu_n of base
// measures: mu_n^T = mu_N^T P_{N,n} and sum_k mu_n(k) h_n(k) = 1.
// Stationary primitive towers get the exact left Perron eigenvector over
// Q(perron root); scalar towers (all C_n = 1) get mu_n = 1/h_n.  General
// towers get certified interval enclosures from the hull of normalized
// transition rows.

#include <optional>
#include <vector>

#include "cantor/dyadic.hpp"
#include "cantor/numberfield.hpp"
#include "cantor/tower.hpp"

namespace cantor {

struct MeasureVector {
  int level = 1;
  std::vector<FieldElement> values;
};

struct MeasureEnclosure {
  int level = 1;
  std::vector<Interval> values;
  bool width_ok = false;  // all widths <= requested eps
};

struct ErgodicityCertificate {
  enum class Verdict { UniquelyErgodicCertified, Unknown };
  enum class Reason { StationaryPrimitive, ProjectiveContraction, None };
  Verdict verdict = Verdict::Unknown;
  Reason reason = Reason::None;
  // For ProjectiveContraction: a certified per-step upper bound < 1 on the
  // Birkhoff contraction coefficient of the repeated matrix.
  Rat rho = 0;
};

class ExactMeasure {
 public:
  // Throws unless the tower is stationary primitive (Perron field degree
  // <= max_field_degree) or scalar.
  static ExactMeasure compute(const Tower& t, int max_field_degree = 4);

  const FieldPtr& field() const { return field_; }
  const FieldElement& perron_root() const { return perron_root_; }
  MeasureVector at_level(int n) const;

 private:
  ExactMeasure() : perron_root_(Rat(0)) {}
  const Tower* tower() const { return &tower_storage_; }

  Tower tower_storage_;
  FieldPtr field_;
  FieldElement perron_root_;
  std::vector<FieldElement> mu_hat_;  // unnormalized left eigenvector
};

// Enclosure of mu_n from depth N = min(levels, n + depth_hint): hull over
// l of rows P_{N,n}(l, .) / h_N(l).  Widths are non-increasing in N.
MeasureEnclosure measure_enclosure(const Tower& t, int n, const Rat& eps, int depth = 0);

ErgodicityCertificate ergodicity_certificate(const Tower& t, int depth = 0);

}  // namespace cantor
