// Acceptance battery: ten independent checks, one pass/fail line each.
// Tolerances and time limits are pinned here; the process exit code is
// the number of failed checks.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cantor/catalog.hpp"
#include "cantor/cli.hpp"
#include "cantor/dimgroup.hpp"
#include "cantor/measure.hpp"
#include "cantor/spectra.hpp"
#include "cantor/tower.hpp"

using namespace cantor;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream why;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (!ok) why << "; ";
      ok = false;
      why << what;
    }
  }
};

long run_ms(const std::function<void(Check&)>& body, Check& c) {
  auto t0 = std::chrono::steady_clock::now();
  body(c);
  auto d = std::chrono::steady_clock::now() - t0;
  return std::chrono::duration_cast<std::chrono::milliseconds>(d).count();
}

const Rat kTol6 = Rat(1, 1000000);
const Rat kTol8 = Rat(1, 100000000);

bool below(const Interval& x, const Rat& bound) {
  return x.hi.to_rat() < bound && x.lo.to_rat() > -bound;
}

FieldElement golden() {
  FieldPtr f = NumberField::sqrt_field(Int(5));
  return FieldElement(f, {Rat(-1, 2), Rat(1, 2)});
}

std::vector<Int> tail_counts(const std::vector<int>& ord, size_t from, int width) {
  std::vector<Int> s(size_t(width), Int(0));
  for (size_t i = from; i < ord.size(); ++i) s[size_t(ord[i] - 1)] += 1;
  return s;
}

FieldElement dot_v(const std::vector<Int>& s, const std::vector<FieldElement>& v) {
  FieldElement acc{Rat(0)};
  for (size_t i = 0; i < s.size(); ++i)
    if (s[i] != 0) acc = acc + FieldElement(Rat(s[i])) * v[i];
  return acc;
}

Rat dot_w(const std::vector<Int>& s, const std::vector<Int>& w) {
  Int acc = 0;
  for (size_t i = 0; i < s.size(); ++i) acc += s[i] * w[i];
  return Rat(acc);
}

Int dot_h(const std::vector<Int>& s, const std::vector<Int>& h) {
  Int acc = 0;
  for (size_t i = 0; i < s.size(); ++i) acc += s[i] * h[i];
  return acc;
}

// 1. Exact identities H_n = M_n H_{n-1}, P_{n,m} H_m = H_n,
//    mu_m^T = mu_n^T P_{n,m}, <mu_1, H_1> = 1 on fibonacci at 40 levels.
void c1(Check& c) {
  Tower t = catalog_tower("fibonacci", 40);
  c.require(t.levels() == 40, "40 levels built");
  ExactMeasure mu = ExactMeasure::compute(t);
  std::mt19937 rng(20260822);
  std::uniform_int_distribution<int> pick(1, 40);
  for (int trial = 0; trial < 50; ++trial) {
    int a = pick(rng), b = pick(rng);
    if (a == b) {
      --trial;
      continue;
    }
    int n = std::max(a, b), m = std::min(a, b);
    const auto& hn = t.heights(n);
    const auto& hm = t.heights(m);
    std::vector<Int> mh = t.matrix(n).mul_vec(t.heights(n - 1));
    c.require(mh == hn, "H_n = M_n H_{n-1}");
    IntMat p = t.product(n, m);
    c.require(p.mul_vec(hm) == hn, "P_{n,m} H_m = H_n");
    MeasureVector mn = mu.at_level(n), mm = mu.at_level(m);
    for (int k = 0; k < t.C(m); ++k) {
      FieldElement acc{Rat(0)};
      for (int l = 0; l < t.C(n); ++l)
        acc = acc + mn.values[size_t(l)] * FieldElement(Rat(p(l, k)));
      c.require(acc == mm.values[size_t(k)], "mu_m^T = mu_n^T P_{n,m}");
    }
  }
  MeasureVector m1 = mu.at_level(1);
  FieldElement total{Rat(0)};
  for (size_t k = 0; k < m1.values.size(); ++k)
    total = total + m1.values[k] * FieldElement(Rat(t.heights(1)[k]));
  c.require(total == FieldElement(Rat(1)), "<mu_1, H_1> = 1");
}

// 2. Golden-angle quotient (Z + aZ)/(Z + 2aZ): invariant factors (1, 2).
void c2(Check& c) {
  CatalogGroups g = catalog_groups("sec43", 1);
  QuotientInvariants q = torsion_quotient(g.image, g.eigen);
  c.require(q.factors == std::vector<Int>({Int(1), Int(2)}), "factors (1,2)");
  c.require(q.free_rank == 0, "free rank 0");
}

// 3. Factorial chain: at level k the approximant (1/k!)Z holds 1/k, while
//    j/k stays outside Z for 0 < j < k, so 1/k + Z has order exactly k.
void c3(Check& c) {
  for (int k = 2; k <= 50; ++k) {
    CatalogGroups g = catalog_groups("sec42", k);
    c.require(g.image.contains(FieldElement(make_rat(Int(1), Int(k)))), "1/k in approximant");
    c.require(g.eigen.contains(FieldElement(Rat(1))), "1 in E");
    for (int j = 1; j < k; ++j)
      c.require(!g.eigen.contains(FieldElement(make_rat(Int(j), Int(k)))), "j/k outside E");
  }
}

// 4. Base-2 odometer rationals: 1/2^j enters at level j+1; 1/3 is refuted
//    by the modular height cycle.
void c4(Check& c) {
  Tower t = catalog_tower("odometer2", 12);
  Int p2 = 1;
  for (int j = 0; j <= 20; ++j) {
    RationalMembership r = rational_member(t, Int(1), p2, 64);
    c.require(r.status == RationalMembership::Status::MemberAtLevel, "1/2^j member");
    c.require(r.level == j + 1, "member level j+1");
    p2 *= 2;
  }
  RationalMembership r3 = rational_member(t, Int(1), Int(3), 64);
  c.require(r3.status == RationalMembership::Status::CertifiedNonMember, "1/3 refuted");
  c.require(r3.period > 0, "modular cycle found");
}

// 5. Battery on fibonacci: the declared angle passes to depth 30 with
//    geometric decay near phi^-2; the halved angle and 1/2 are refuted.
void c5(Check& c) {
  Tower t = catalog_tower("fibonacci", 32);
  ExactMeasure mu = ExactMeasure::compute(t);
  FieldElement a = golden();

  EigenParams params;
  params.m = 2;
  params.N = 30;
  CriteriaReport r = eigen_verdict(t, mu, a, params);
  c.require(r.verdict.kind == Verdict::Kind::PassesUpTo, "angle passes");
  c.require(r.verdict.level == 30, "depth 30");
  c.require(bool(r.summability), "summability report");
  if (r.summability) {
    c.require(!r.summability->terms.empty() && below(r.summability->terms.back(), kTol6),
              "summability tail < 1e-6");
    c.require(bool(r.summability->rho_hat), "decay ratio measured");
    if (r.summability->rho_hat)
      c.require(r.summability->rho_hat->lo.to_rat() >= Rat(33, 100) &&
                    r.summability->rho_hat->hi.to_rat() <= Rat(43, 100),
                "rho_hat in [0.33, 0.43]");
  }
  SuffixReport s = suffix_criterion(t, a, 31);
  c.require(!s.deltas.empty() && below(s.deltas.back(), kTol6), "delta_30 < 1e-6");

  CriteriaReport half = eigen_verdict(t, mu, a * FieldElement(Rat(1, 2)), params);
  c.require(half.verdict.kind == Verdict::Kind::RefutedNecessary &&
                half.verdict.reason == Verdict::Reason::Orthogonality,
            "a/2 refuted by orthogonality");

  CriteriaReport rat = eigen_verdict(t, mu, FieldElement(Rat(1, 2)), params);
  c.require(rat.verdict.kind == Verdict::Kind::RefutedNecessary &&
                rat.verdict.reason == Verdict::Reason::RationalCertifiedNonMember,
            "1/2 refuted by the rational route");
}

// 6. Infinitesimals: trivial for fibonacci; the symmetric demo has witness
//    (1,-1) with zero pairing that no transition power kills.
void c6(Check& c) {
  Tower fib = catalog_tower("fibonacci", 12);
  ExactMeasure fmu = ExactMeasure::compute(fib);
  InfinitesimalReport fr = infinitesimal_report(fib, fmu);
  c.require(fr.verdict == InfinitesimalReport::Verdict::Trivial, "fibonacci trivial");

  Tower t = catalog_tower("inf-demo", 21);
  ExactMeasure mu = ExactMeasure::compute(t);
  InfinitesimalReport r = infinitesimal_report(t, mu);
  c.require(r.verdict == InfinitesimalReport::Verdict::NonTrivial, "demo nontrivial");
  c.require(bool(r.witness), "witness reported");
  if (!r.witness) return;
  const std::vector<Int>& w = *r.witness;
  c.require(w == std::vector<Int>({Int(1), Int(-1)}), "witness (1,-1)");
  MeasureVector m1 = mu.at_level(1);
  FieldElement pair{Rat(0)};
  for (size_t k = 0; k < w.size(); ++k)
    pair = pair + m1.values[k] * FieldElement(Rat(w[k]));
  c.require(pair == FieldElement(Rat(0)), "<mu, v> = 0");
  for (int j = 2; j <= 20; ++j) {
    std::vector<Int> img = t.product(j, 1).mul_vec(w);
    bool zero = true;
    for (const auto& x : img)
      if (x != 0) zero = false;
    c.require(!zero, "P_{j,1} v != 0");
  }
}

// 7. Torsion audit of the golden tower flags no (alpha, k) pair.
void c7(Check& c) {
  Tower t = catalog_tower("fibonacci", 26);
  ExactMeasure mu = ExactMeasure::compute(t);
  AuditReport r = torsion_audit(t, mu, 1, 4, 5, 25, 4);
  c.require(r.candidates == 81, "81 candidates in the box");
  c.require(r.flags.empty(), "no flags");
  c.require(r.passing + r.refuted == r.candidates, "verdict partition");
}

// 8. Suffix/entrance-time equivalence on a hand-sized three-level tower
//    (11 edges): delta_n from suffix vectors equals delta_n from exhaustive
//    path enumeration bridged by return phases, exactly.
void c8(Check& c) {
  DiagramSpec spec;
  spec.kind = DiagramSpec::Kind::Explicit;
  spec.matrices = {IntMat(2, 2, {Int(1), Int(1), Int(1), Int(1)}),
                   IntMat(2, 2, {Int(2), Int(1), Int(1), Int(1)})};
  spec.name = "suffix-check";
  Tower t = Tower::build(spec, 3);
  c.require(t.levels() == 3, "three levels");
  FieldElement alpha{Rat(1, 5)};

  for (int n = 1; n <= 2; ++n) {
    Decomposition dec = decompose(t, alpha, n);
    const auto& h = t.heights(n);

    // Side A: direct maximum over the stored suffix vectors.
    FieldElement side_a{Rat(0)};
    SuffixSet ss = t.suffix_set(n);
    for (const auto& per : ss.per_vertex)
      for (const auto& s : per) {
        FieldElement x = dot_v(s, dec.v).abs();
        if (elem_less(side_a, x)) side_a = x;
      }

    // Side B: every level-(n+1) cylinder with an all-first prefix, entrance
    // time through return_phase, integer part subtracted, never rounded.
    FieldElement side_b{Rat(0)};
    auto consider = [&](const FieldElement& x) {
      FieldElement a = x.abs();
      if (elem_less(side_b, a)) side_b = a;
    };
    for (int l = 1; l <= t.C(n + 1); ++l) {
      const auto& ord = t.order(n + 1, l);
      // Full crossing: the base point's first positive return is the full
      // tower height.
      std::vector<Int> full = tail_counts(ord, 0, t.C(n));
      c.require(dot_h(full, h) == t.heights(n + 1)[size_t(l - 1)],
                "full tail sums to the height");
      consider(FieldElement(Rat(t.heights(n + 1)[size_t(l - 1)])) * alpha -
               FieldElement(dot_w(full, dec.w)));
      for (int p = 1; p <= int(ord.size()); ++p) {
        TowerPath path;
        path.level = n + 1;
        path.top_vertex = l;
        path.positions.assign(size_t(n), 1);
        path.positions.back() = p;
        ReturnPhase rp = return_phase(t, path, alpha);
        // The first departing level counts its own sub-column.
        std::vector<Int> s = p == 1 ? std::vector<Int>(size_t(t.C(n)), Int(0))
                                    : tail_counts(ord, size_t(p - 1), t.C(n));
        c.require(rp.r == dot_h(s, h), "entrance time matches the suffix vector");
        FieldElement val =
            FieldElement(Rat(rp.r)) * alpha - FieldElement(dot_w(s, dec.w));
        // Phase consistency: alpha r and the reported phase differ by an
        // integer.
        FieldElement gap = FieldElement(Rat(rp.r)) * alpha - rp.phase;
        c.require(gap.is_rational() && gap.as_rat().get_den() == 1,
                  "return phase is alpha r mod 1");
        consider(val);
      }
    }
    c.require(side_a == side_b, "delta_" + std::to_string(n) + " equal on both sides");

    SuffixReport sr = suffix_criterion(t, alpha, n + 1);
    const Interval& enc = sr.deltas.back();
    c.require(enc.lo.to_rat() <= side_a.as_rat() && side_a.as_rat() <= enc.hi.to_rat(),
              "reported enclosure brackets the exact delta");
  }
}

// 9. Row-convergence diagnostic on fibonacci reaches 1e-8 by depth 40.
void c9(Check& c) {
  Tower t = catalog_tower("fibonacci", 40);
  ExactMeasure mu = ExactMeasure::compute(t);
  ConvergenceDiagnostic d = convergence_diagnostic(t, mu, 1, 40);
  c.require(!d.terms.empty() && below(d.terms.back(), kTol8), "tail term < 1e-8");
  c.require(!d.partial_sums.empty(), "partial sums reported");
}

// 10. Audit reports are byte-identical for 1 and 4 worker threads.
void c10(Check& c) {
  RunConfig cfg;
  cfg.command = "audit";
  cfg.catalog = "fibonacci";
  cfg.m = 1;
  cfg.wbox = 2;
  cfg.kmax = 3;
  cfg.N = 10;
  cfg.threads = 0;
  setenv("CANTOR_SPECTRA_THREADS", "1", 1);
  CliResult one = run(cfg);
  setenv("CANTOR_SPECTRA_THREADS", "4", 1);
  CliResult four = run(cfg);
  unsetenv("CANTOR_SPECTRA_THREADS");
  c.require(one.exit_code == 0 && four.exit_code == 0, "both runs succeed");
  c.require(one.json == four.json, "JSON bytes equal");
  c.require(one.text == four.text, "text bytes equal");
}

struct Criterion {
  const char* label;
  long limit_ms;
  std::function<void(Check&)> body;
};

}  // namespace

int main() {
  std::vector<Criterion> cs = {
      {"exact tower and measure identities, fibonacci depth 40", 5000, c1},
      {"golden quotient torsion Z/2Z", 1000, c2},
      {"factorial approximants carry order-k torsion, k <= 50", 1000, c3},
      {"odometer rational memberships and refutation", 5000, c4},
      {"eigenvalue battery verdicts on fibonacci", 10000, c5},
      {"infinitesimal verdicts and witness", 2000, c6},
      {"torsion audit flags nothing on fibonacci", 60000, c7},
      {"suffix vectors match exhaustive path enumeration", 1000, c8},
      {"row convergence reaches 1e-8 by depth 40", 30000, c9},
      {"audit determinism across thread counts", 60000, c10},
  };
  int failures = 0;
  for (size_t i = 0; i < cs.size(); ++i) {
    Check chk;
    long ms = 0;
    try {
      ms = run_ms(cs[i].body, chk);
      if (ms > cs[i].limit_ms)
        chk.require(false, "took " + std::to_string(ms) + " ms, limit " +
                               std::to_string(cs[i].limit_ms));
    } catch (const std::exception& e) {
      chk.require(false, std::string("exception: ") + e.what());
    }
    std::cout << (chk.ok ? "[PASS] " : "[FAIL] ") << (i + 1) << ". " << cs[i].label
              << " (" << ms << " ms)";
    if (!chk.ok) std::cout << " -- " << chk.why.str();
    std::cout << "\n";
    if (!chk.ok) ++failures;
  }
  std::cout << (failures == 0 ? "all criteria passed" : "criteria failed") << "\n";
  return failures;
}
