#pragma once

// Necessary-condition battery for candidate continuous eigenvalues
// exp(2 pi i alpha), and the torsion audit built on top of it.
//
// Heights decompose as alpha H_m = v_m + w_m with w_m integer and v_m the
// componentwise signed fractional part in [-1/2, 1/2).  A true eigenvalue
// forces, for some m: alpha = mu_m^T w (an integer combination of the
// mu_m(k)), summability of ||P_{n,m} v_m|| over n, and decay of the
// suffix-weighted sums delta_n.  Failures refute; passes are reported up
// to the computed depth, never as proof.

#include <optional>
#include <string>
#include <vector>

#include "cantor/dimgroup.hpp"
#include "cantor/dyadic.hpp"
#include "cantor/measure.hpp"
#include "cantor/numberfield.hpp"
#include "cantor/tower.hpp"

namespace cantor {

struct Decomposition {
  int m = 1;
  std::vector<Int> w;           // nearest integer vector to alpha H_m
  std::vector<FieldElement> v;  // alpha H_m - w, entries in [-1/2, 1/2)
};
Decomposition decompose(const Tower& t, const FieldElement& alpha, int m);

// alpha in the group generated by the mu_m(k); monotone in m.
bool orthogonality_test(const Tower& t, const ExactMeasure& mu,
                        const FieldElement& alpha, int m);

struct SummabilityReport {
  int m = 1, N = 1;
  std::vector<Interval> terms;         // ||P_{j,m} v_m||_inf, j = m+1..N
  std::vector<Interval> partial_sums;
  std::optional<Interval> rho_hat;     // geometric-ratio fit on the tail window
  bool divergence_evidence = false;    // tail-window floor not shrinking
  bool divergence_certified = false;   // periodic structure keeps terms >= 1/q
};
SummabilityReport summability_test(const Tower& t, const FieldElement& alpha, int m, int N);

struct SuffixReport {
  int N = 1;
  std::vector<Interval> deltas;  // delta_n, n = 1..N-1
  bool nonconvergence_evidence = false;
  bool nonconvergence_certified = false;
};
// delta_n = max over level-(n+1) vertices and suffix vectors s of |<s, v_n>|.
SuffixReport suffix_criterion(const Tower& t, const FieldElement& alpha, int N);

// Fractional part of alpha * r_n(x) in [0, 1) for the cylinder point given
// by the path, with certified enclosure.
struct ReturnPhase {
  Int r;
  FieldElement phase;
  Interval enclosure;
};
ReturnPhase return_phase(const Tower& t, const TowerPath& path, const FieldElement& alpha);

struct Verdict {
  enum class Kind { RefutedNecessary, PassesUpTo, CertifiedEigen };
  enum class Reason {
    None,
    Orthogonality,
    SummabilityDivergence,
    SuffixDivergence,
    RationalCertifiedNonMember,
    TorsionLemma,
    RationalMember,
    DeclaredByConstruction,
  };
  Kind kind = Kind::PassesUpTo;
  Reason reason = Reason::None;
  int level = 0;  // PassesUpTo depth, or certifying level
  static const char* reason_name(Reason r);
};

struct EigenParams {
  int m = 2;        // battery base level; re-checked at m+1
  int N = 25;       // battery depth
  int depth = 64;   // height-divisibility scan depth for rational alpha
  bool trust_declared = false;  // allow certification from spec metadata
};

struct CriteriaReport {
  FieldElement alpha;
  Verdict verdict;
  std::optional<Decomposition> decomposition;   // at m (irrational route)
  std::optional<bool> orthogonality_exact;      // resolved at level m+1
  bool orthogonality_at_m = false, orthogonality_at_m1 = false;
  std::optional<std::vector<Int>> orthogonality_witness;  // w with alpha = mu_m^T w
  std::optional<SummabilityReport> summability;
  std::optional<SuffixReport> suffix;
  std::optional<RationalMembership> rational;   // rational route
};

CriteriaReport eigen_verdict(const Tower& t, const ExactMeasure& mu,
                             const FieldElement& alpha, const EigenParams& params = {});

struct Candidate {
  std::vector<Int> w;
  FieldElement alpha;
};
// All alpha = mu_m^T w over ||w||_inf <= wbox, deduplicated exactly,
// w enumerated lexicographically.  Closed under negation; contains 0, and
// contains 1 whenever ||H_m||_inf <= wbox.
std::vector<Candidate> enumerate_candidates(const Tower& t, const ExactMeasure& mu,
                                            int m, int wbox);

struct AuditFlag {
  FieldElement alpha;
  int k = 0;
  Verdict::Reason alpha_reason = Verdict::Reason::None;
  // Levels n <= N at which (1/k) P_{n,m} w_m(k alpha) fails to be integral:
  // a positive count documents the obstruction mechanism.
  int nonintegral_levels = 0;
};

struct AuditReport {
  int m = 1, wbox = 1, kmax = 1, N = 1;
  int candidates = 0, passing = 0, refuted = 0;
  std::vector<AuditFlag> flags;  // refuted alpha with k*alpha passing, k <= kmax
};

// Torsion audit of the eigenvalue group inside the image subgroup: flags
// candidate pairs (alpha, k) with k*alpha accepted but alpha refuted.
// Empty on systems with trivial infinitesimals.  Candidate battery runs
// are independent and parallelized up to `threads` (result order fixed).
AuditReport torsion_audit(const Tower& t, const ExactMeasure& mu, int m, int wbox,
                          int kmax, int N, int threads = 1);

struct ConvergenceDiagnostic {
  int m = 1, N = 1;
  std::vector<Interval> terms;  // max_i ||h_n(i) mu_m - P_{n,m}(i,.)||_inf
  std::vector<Interval> partial_sums;
  std::optional<Interval> ratio_estimate;
};
// Row-convergence diagnostic: how fast normalized transition rows approach
// mu_m; summable terms support the battery's quantitative hypotheses.
ConvergenceDiagnostic convergence_diagnostic(const Tower& t, const ExactMeasure& mu,
                                             int m, int N);

}  // namespace cantor
