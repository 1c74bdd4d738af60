#include "cantor/spectra.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <thread>

namespace cantor {

namespace {

constexpr long kPrec = 64;
constexpr int kCycleSearchMax = 256;

Interval enclose_elem(const FieldElement& x) { return x.enclosure(kPrec); }

FieldElement elem_abs_max(const std::vector<FieldElement>& v) {
  FieldElement best(Rat(0));
  for (const auto& x : v) {
    FieldElement a = x.abs();
    if (elem_less(best, a)) best = a;
  }
  return best;
}

std::vector<FieldElement> mat_field_vec(const IntMat& a, const std::vector<FieldElement>& v) {
  if (int(v.size()) != a.cols()) throw Error("matrix-vector shape mismatch");
  std::vector<FieldElement> out(size_t(a.rows()));
  for (int i = 0; i < a.rows(); ++i) {
    FieldElement acc(Rat(0));
    for (int j = 0; j < a.cols(); ++j) {
      const Int& c = a(i, j);
      if (c == 0) continue;
      acc = acc + FieldElement(Rat(c)) * v[size_t(j)];
    }
    out[size_t(i)] = acc;
  }
  return out;
}

// Signed fractional parts: x = w + v componentwise with v in [-1/2, 1/2).
std::pair<std::vector<Int>, std::vector<FieldElement>> split_vec(
    const std::vector<FieldElement>& x) {
  std::vector<Int> w(x.size());
  std::vector<FieldElement> v(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    auto [z, f] = x[i].nearest_integer_split();
    w[i] = z;
    v[i] = f;
  }
  return {std::move(w), std::move(v)};
}

// Cycle certificate on the fractional orbit v_{j+1} = frac(M_{j+1} v_j):
// if the (continuation state, v) pair recurs and `score` stays positive
// around the cycle, score(v_n) is bounded below for every n, forever.
bool fractional_orbit_certificate(
    const Tower& t, const std::vector<FieldElement>& v_start, int m,
    const std::function<FieldElement(const std::vector<FieldElement>&)>& score) {
  if (t.continuation() == Tower::Continuation::None) return false;
  using Key = std::pair<int, std::vector<std::vector<Rat>>>;
  auto key_of = [](int state, const std::vector<FieldElement>& v) {
    std::vector<std::vector<Rat>> c;
    c.reserve(v.size());
    for (const auto& x : v) c.push_back(x.coords());
    return Key{state, std::move(c)};
  };
  std::map<Key, int> seen;
  std::vector<std::vector<FieldElement>> orbit;
  std::vector<FieldElement> v = v_start;
  int state = t.continuation_state(std::min(m, t.levels()));
  for (int j = m; j < m + kCycleSearchMax; ++j) {
    Key k = key_of(state, v);
    auto it = seen.find(k);
    if (it != seen.end()) {
      for (int idx = it->second; idx < int(orbit.size()); ++idx)
        if (score(orbit[size_t(idx)]).sign() <= 0) return false;
      return true;
    }
    seen.emplace(std::move(k), int(orbit.size()));
    orbit.push_back(v);
    IntMat a;
    if (j + 1 <= t.levels()) {
      a = t.matrix(j + 1);
      state = t.continuation_state(j + 1);
    } else {
      auto [mat, ns] = t.continuation_next(state);
      a = std::move(mat);
      state = ns;
    }
    v = split_vec(mat_field_vec(a, v)).second;
  }
  return false;
}

// Trailing-window floor: terms hold a positive level over the last window
// and did not drop below half of the window before it.
bool window_evidence(const std::vector<FieldElement>& terms) {
  int n = int(terms.size());
  int w = std::max(1, (n + 2) / 3);
  if (n < 2 * w) return false;
  auto window_min = [&terms](int b, int e) {
    FieldElement m = terms[size_t(b)];
    for (int i = b + 1; i < e; ++i)
      if (elem_less(terms[size_t(i)], m)) m = terms[size_t(i)];
    return m;
  };
  FieldElement tail_min = window_min(n - w, n);
  FieldElement prev_min = window_min(n - 2 * w, n - w);
  if (tail_min.sign() <= 0) return false;
  FieldElement half_prev = prev_min / FieldElement(Rat(2));
  return !elem_less(tail_min, half_prev);
}

// Hull of consecutive exact term ratios over the trailing third.
std::optional<Interval> ratio_hull(const std::vector<FieldElement>& terms) {
  int n = int(terms.size());
  int w = std::max(2, (n + 2) / 3);
  if (n < w) return std::nullopt;
  std::optional<Interval> out;
  for (int i = n - w; i + 1 < n; ++i) {
    if (terms[size_t(i)].sign() == 0) return std::nullopt;
    Interval r = enclose_elem(terms[size_t(i + 1)] / terms[size_t(i)]);
    out = out ? Interval::hull(*out, r) : r;
  }
  return out;
}

SubgroupOfR measure_group(const ExactMeasure& mu, int m) {
  MeasureVector v = mu.at_level(m);
  return SubgroupOfR::from_elements(mu.field(), v.values);
}

}  // namespace

Decomposition decompose(const Tower& t, const FieldElement& alpha, int m) {
  if (m < 1 || m > t.levels()) throw Error("level out of range");
  const auto& h = t.heights(m);
  std::vector<FieldElement> ah(h.size());
  for (size_t i = 0; i < h.size(); ++i) ah[i] = alpha * FieldElement(Rat(h[i]));
  Decomposition out;
  out.m = m;
  auto [w, v] = split_vec(ah);
  out.w = std::move(w);
  out.v = std::move(v);
  return out;
}

bool orthogonality_test(const Tower& t, const ExactMeasure& mu,
                        const FieldElement& alpha, int m) {
  (void)t;
  return measure_group(mu, m).contains(alpha);
}

SummabilityReport summability_test(const Tower& t, const FieldElement& alpha, int m, int N) {
  if (m < 1 || m > t.levels()) throw Error("level out of range");
  if (N < m || N > t.levels()) throw Error("depth out of range");
  Decomposition dec = decompose(t, alpha, m);
  SummabilityReport out;
  out.m = m;
  out.N = N;
  std::vector<FieldElement> exact_terms;
  FieldElement sum(Rat(0));
  for (int j = m + 1; j <= N; ++j) {
    FieldElement term = elem_abs_max(mat_field_vec(t.product(j, m), dec.v));
    sum = sum + term;
    out.terms.push_back(enclose_elem(term));
    out.partial_sums.push_back(enclose_elem(sum));
    exact_terms.push_back(std::move(term));
  }
  out.rho_hat = ratio_hull(exact_terms);
  out.divergence_evidence = window_evidence(exact_terms);
  // ||P_{n,m} v_m|| >= ||v_n||, so a forever-positive fractional orbit
  // keeps the terms away from zero.
  out.divergence_certified = fractional_orbit_certificate(
      t, dec.v, m, [](const std::vector<FieldElement>& v) { return elem_abs_max(v); });
  return out;
}

SuffixReport suffix_criterion(const Tower& t, const FieldElement& alpha, int N) {
  if (N < 2 || N > t.levels()) throw Error("depth out of range");
  SuffixReport out;
  out.N = N;
  std::vector<FieldElement> exact;
  for (int n = 1; n <= N - 1; ++n) {
    SuffixSet s = t.suffix_set(n);
    Decomposition dec = decompose(t, alpha, n);
    FieldElement best(Rat(0));
    for (const auto& per : s.per_vertex)
      for (const auto& tail : per) {
        FieldElement acc(Rat(0));
        for (size_t i = 0; i < tail.size(); ++i) {
          if (tail[i] == 0) continue;
          acc = acc + FieldElement(Rat(tail[i])) * dec.v[i];
        }
        FieldElement a = acc.abs();
        if (elem_less(best, a)) best = a;
      }
    out.deltas.push_back(enclose_elem(best));
    exact.push_back(std::move(best));
  }
  out.nonconvergence_evidence = window_evidence(exact);
  if (t.uniform_orders()) {
    SuffixSet s = t.suffix_set(1);
    Decomposition dec = decompose(t, alpha, 1);
    auto delta_of = [s](const std::vector<FieldElement>& v) {
      FieldElement best(Rat(0));
      for (const auto& per : s.per_vertex)
        for (const auto& tail : per) {
          FieldElement acc(Rat(0));
          for (size_t i = 0; i < tail.size(); ++i) {
            if (tail[i] == 0) continue;
            acc = acc + FieldElement(Rat(tail[i])) * v[i];
          }
          FieldElement a = acc.abs();
          if (elem_less(best, a)) best = a;
        }
      return best;
    };
    out.nonconvergence_certified = fractional_orbit_certificate(t, dec.v, 1, delta_of);
  }
  return out;
}

ReturnPhase return_phase(const Tower& t, const TowerPath& path, const FieldElement& alpha) {
  ReturnPhase out;
  out.r = t.entrance_time(path);
  FieldElement ar = alpha * FieldElement(Rat(out.r));
  auto [z, f] = ar.nearest_integer_split();
  (void)z;
  if (f.sign() < 0) f = f + FieldElement(Rat(1));
  out.phase = f;
  out.enclosure = enclose_elem(f);
  return out;
}

const char* Verdict::reason_name(Reason r) {
  switch (r) {
    case Reason::None: return "none";
    case Reason::Orthogonality: return "orthogonality";
    case Reason::SummabilityDivergence: return "summability-divergence";
    case Reason::SuffixDivergence: return "suffix-divergence";
    case Reason::RationalCertifiedNonMember: return "rational-certified-non-member";
    case Reason::TorsionLemma: return "torsion-lemma";
    case Reason::RationalMember: return "rational-member";
    case Reason::DeclaredByConstruction: return "declared-by-construction";
  }
  return "none";
}

CriteriaReport eigen_verdict(const Tower& t, const ExactMeasure& mu,
                             const FieldElement& alpha, const EigenParams& params) {
  int m = params.m;
  int N = params.N;
  if (m < 1 || m + 1 > t.levels()) throw Error("battery base level needs m+1 built levels");
  if (N > t.levels()) throw Error("battery depth exceeds built levels");
  if (N < m + 1) throw Error("battery depth must exceed the base level");

  CriteriaReport rep;
  rep.alpha = alpha;

  bool decided = false;
  if (alpha.is_rational()) {
    Rat a = alpha.as_rat();
    RationalMembership rm = rational_member(t, a.get_num(), a.get_den(), params.depth);
    rep.rational = rm;
    if (rm.status == RationalMembership::Status::MemberAtLevel) {
      rep.verdict.kind = Verdict::Kind::CertifiedEigen;
      rep.verdict.reason = Verdict::Reason::RationalMember;
      rep.verdict.level = rm.level;
      decided = true;
    } else if (rm.status == RationalMembership::Status::CertifiedNonMember) {
      rep.verdict.kind = Verdict::Kind::RefutedNecessary;
      rep.verdict.reason = Verdict::Reason::RationalCertifiedNonMember;
      rep.verdict.level = rm.level;
      decided = true;
    }
  }

  if (!decided && params.trust_declared && t.declared_angle() &&
      alpha == *t.declared_angle()) {
    rep.verdict.kind = Verdict::Kind::CertifiedEigen;
    rep.verdict.reason = Verdict::Reason::DeclaredByConstruction;
    rep.verdict.level = 0;
    rep.decomposition = decompose(t, alpha, m);
    return rep;
  }

  rep.decomposition = decompose(t, alpha, m);
  rep.orthogonality_at_m = orthogonality_test(t, mu, alpha, m);
  rep.orthogonality_at_m1 = orthogonality_test(t, mu, alpha, m + 1);
  if (rep.orthogonality_at_m1)
    rep.orthogonality_witness = measure_group(mu, m + 1).combination(alpha);
  rep.summability = summability_test(t, alpha, m, N);
  SummabilityReport summ1 = summability_test(t, alpha, m + 1, N);
  rep.suffix = suffix_criterion(t, alpha, N);

  if (decided) return rep;  // rational certificate dominates the battery
  rep.orthogonality_exact = rep.orthogonality_at_m1;

  bool orth_refuted = !rep.orthogonality_at_m && !rep.orthogonality_at_m1;
  bool summ_refuted = rep.summability->divergence_certified && summ1.divergence_certified;
  if (orth_refuted) {
    rep.verdict.kind = Verdict::Kind::RefutedNecessary;
    rep.verdict.reason = Verdict::Reason::Orthogonality;
    rep.verdict.level = m + 1;
  } else if (summ_refuted) {
    rep.verdict.kind = Verdict::Kind::RefutedNecessary;
    rep.verdict.reason = Verdict::Reason::SummabilityDivergence;
    rep.verdict.level = m;
  } else if (rep.suffix->nonconvergence_certified) {
    rep.verdict.kind = Verdict::Kind::RefutedNecessary;
    rep.verdict.reason = Verdict::Reason::SuffixDivergence;
    rep.verdict.level = N;
  } else {
    rep.verdict.kind = Verdict::Kind::PassesUpTo;
    rep.verdict.reason = Verdict::Reason::None;
    rep.verdict.level = N;
  }
  return rep;
}

std::vector<Candidate> enumerate_candidates(const Tower& t, const ExactMeasure& mu,
                                            int m, int wbox) {
  if (wbox < 1) throw Error("candidate box must be >= 1");
  if (m < 1 || m > t.levels()) throw Error("level out of range");
  MeasureVector mv = mu.at_level(m);
  int c = int(mv.values.size());
  std::vector<Candidate> out;
  std::vector<Int> w(size_t(c), Int(-wbox));
  for (;;) {
    FieldElement a(Rat(0));
    for (int i = 0; i < c; ++i)
      if (w[size_t(i)] != 0) a = a + FieldElement(Rat(w[size_t(i)])) * mv.values[size_t(i)];
    bool dup = false;
    for (const auto& cand : out)
      if (cand.alpha == a) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(Candidate{w, a});
    int i = c - 1;
    while (i >= 0) {
      w[size_t(i)] += 1;
      if (w[size_t(i)] <= wbox) break;
      w[size_t(i)] = -wbox;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

AuditReport torsion_audit(const Tower& t, const ExactMeasure& mu, int m, int wbox,
                          int kmax, int N, int threads) {
  AuditReport rep;
  rep.m = m;
  rep.wbox = wbox;
  rep.kmax = kmax;
  rep.N = N;

  std::vector<Candidate> cands = enumerate_candidates(t, mu, m, wbox);
  rep.candidates = int(cands.size());

  EigenParams params;
  params.m = m;
  params.N = N;
  params.depth = std::max(N, 32);

  std::vector<CriteriaReport> results(cands.size());
  if (threads < 1) threads = 1;
  threads = std::min<int>(threads, int(cands.size()) > 0 ? int(cands.size()) : 1);
  if (threads <= 1) {
    for (size_t i = 0; i < cands.size(); ++i)
      results[i] = eigen_verdict(t, mu, cands[i].alpha, params);
  } else {
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= cands.size()) return;
        results[i] = eigen_verdict(t, mu, cands[i].alpha, params);
      }
    };
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<size_t> passing_idx, refuted_idx;
  for (size_t i = 0; i < cands.size(); ++i) {
    if (results[i].verdict.kind == Verdict::Kind::RefutedNecessary)
      refuted_idx.push_back(i);
    else
      passing_idx.push_back(i);
  }
  rep.passing = int(passing_idx.size());
  rep.refuted = int(refuted_idx.size());

  for (size_t ri : refuted_idx) {
    const FieldElement& a = cands[ri].alpha;
    for (int k = 2; k <= kmax; ++k) {
      FieldElement ka = FieldElement(Rat(k)) * a;
      bool in_pass = false;
      for (size_t pi : passing_idx)
        if (cands[pi].alpha == ka) {
          in_pass = true;
          break;
        }
      if (!in_pass) continue;
      AuditFlag flag;
      flag.alpha = a;
      flag.k = k;
      flag.alpha_reason = results[ri].verdict.reason;
      Decomposition dk = decompose(t, ka, m);
      int count = 0;
      for (int n = m + 1; n <= N; ++n) {
        std::vector<Int> pw = t.product(n, m).mul_vec(dk.w);
        for (const auto& x : pw)
          if (x % k != 0) {
            ++count;
            break;
          }
      }
      flag.nonintegral_levels = count;
      rep.flags.push_back(std::move(flag));
      break;  // smallest witnessing k per candidate
    }
  }
  return rep;
}

ConvergenceDiagnostic convergence_diagnostic(const Tower& t, const ExactMeasure& mu,
                                             int m, int N) {
  if (m < 1 || m > t.levels()) throw Error("level out of range");
  if (N <= m || N > t.levels()) throw Error("depth out of range");
  ConvergenceDiagnostic out;
  out.m = m;
  out.N = N;
  MeasureVector mv = mu.at_level(m);
  std::vector<FieldElement> exact;
  FieldElement sum(Rat(0));
  for (int n = m + 1; n <= N; ++n) {
    IntMat p = t.product(n, m);
    const auto& h = t.heights(n);
    FieldElement best(Rat(0));
    for (int i = 0; i < p.rows(); ++i) {
      FieldElement hi(Rat(h[size_t(i)]));
      for (int k = 0; k < p.cols(); ++k) {
        FieldElement diff = hi * mv.values[size_t(k)] - FieldElement(Rat(p(i, k)));
        FieldElement a = diff.abs();
        if (elem_less(best, a)) best = a;
      }
    }
    sum = sum + best;
    out.terms.push_back(enclose_elem(best));
    out.partial_sums.push_back(enclose_elem(sum));
    exact.push_back(std::move(best));
  }
  out.ratio_estimate = ratio_hull(exact);
  return out;
}

}  // namespace cantor
