#include "cantor/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <sstream>

#include "cantor/catalog.hpp"
#include "cantor/dimgroup.hpp"
#include "cantor/measure.hpp"
#include "cantor/polynomial.hpp"
#include "cantor/spectra.hpp"
#include "cantor/tower.hpp"
#include "json.hpp"

namespace cantor {

const char* kSchemaName = "cantor-spectra/1";
const char* kToolVersion = "1.0.0";

namespace {

using Json = nlohmann::ordered_json;

struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  long ms() const {
    auto d = std::chrono::steady_clock::now() - t0;
    return std::chrono::duration_cast<std::chrono::milliseconds>(d).count();
  }
};

// Numeric leaves carry an "exact" or "interval" tag; never bare decimals.
// Exact values use rational strings; interval endpoints are dyadic, printed
// as rationals.  Irrational exact values quote coordinates together with
// the minimal polynomial and its creation-time isolating interval, which
// never moves, so reports do not depend on refinement history.
Json ex_int(const Int& z) { return Json{{"exact", to_string(z)}}; }
Json ex_rat(const Rat& q) { return Json{{"exact", to_string(q)}}; }

Json ex_elem(const FieldElement& x) {
  if (x.is_rational()) return Json{{"exact", to_string(x.as_rat())}};
  Json mp = Json::array();
  for (const Int& c : x.field()->minpoly()) mp.push_back(to_string(c));
  auto iso = x.field()->isolating_interval();
  Json coords = Json::array();
  for (const Rat& c : x.coords()) coords.push_back(to_string(c));
  Json body;
  body["minpoly"] = mp;
  body["root_interval"] = Json::array({to_string(iso.first), to_string(iso.second)});
  body["coords"] = coords;
  return Json{{"exact", body}};
}

Json iv(const Interval& x) {
  return Json{{"interval", Json::array({x.lo.str(), x.hi.str()})}};
}

template <typename T, typename F>
Json arr(const std::vector<T>& v, F f) {
  Json a = Json::array();
  for (const auto& e : v) a.push_back(f(e));
  return a;
}

// Truncated exact decimal of a dyadic, for the text rendering only.
std::string approx_str(const Dyadic& d, int digits = 10) {
  Rat q = d.to_rat();
  bool neg = sgn(q) < 0;
  if (neg) q = -q;
  Int ip = rat_floor(q);
  Rat frac = q - Rat(ip);
  std::string s = (neg ? "-" : "") + to_string(ip);
  if (frac == 0) return s;
  s += ".";
  for (int i = 0; i < digits && frac != 0; ++i) {
    frac *= 10;
    Int dig = rat_floor(frac);
    s += to_string(dig);
    frac -= Rat(dig);
  }
  return s;
}

std::string iv_text(const Interval& x) {
  return "[" + approx_str(x.lo) + ", " + approx_str(x.hi) + "]";
}

std::string vec_text(const std::vector<Int>& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += to_string(v[i]);
  }
  return s + ")";
}

int resolve_threads(const RunConfig& cfg, std::ostringstream& log) {
  int n = cfg.threads;
  if (n <= 0) {
    if (const char* env = std::getenv("CANTOR_SPECTRA_THREADS")) n = std::atoi(env);
  }
  if (n <= 0) n = 1;
  log << "[conf] threads " << n << "\n";
  return n;
}

Tower make_tower(const RunConfig& cfg, int levels, std::ostringstream& log) {
  if (cfg.catalog && cfg.spec_json)
    throw Error("give either a catalog name or a diagram spec, not both");
  Stopwatch sw;
  Tower t = [&] {
    if (cfg.catalog) {
      if (!catalog_is_tower(*cfg.catalog))
        throw Error("catalog entry '" + *cfg.catalog +
                    "' is group-level data; only the torsion command accepts it");
      return catalog_tower(*cfg.catalog, levels);
    }
    if (cfg.spec_json) return Tower::build(DiagramSpec::from_json_text(*cfg.spec_json), levels);
    throw Error("no tower source: pass a catalog name or a diagram spec");
  }();
  log << "[time] build " << t.name() << " levels=" << t.levels() << " " << sw.ms() << " ms\n";
  return t;
}

const char* continuation_name(Tower::Continuation c) {
  switch (c) {
    case Tower::Continuation::RepeatMatrix: return "repeat-matrix";
    case Tower::Continuation::CycleMatrices: return "cycle-matrices";
    default: return "none";
  }
}

Json tower_json(const Tower& t) {
  Json out;
  out["name"] = t.name();
  out["levels"] = t.levels();
  Json cs = Json::array();
  for (int n = 1; n <= t.levels(); ++n) cs.push_back(t.C(n));
  out["towers_per_level"] = cs;
  out["continuation"] = continuation_name(t.continuation());
  Json win = Json::array();
  for (int w : t.composition().window) win.push_back(w);
  out["composition_window"] = win;
  if (t.declared_angle()) out["declared_angle"] = ex_elem(*t.declared_angle());
  return out;
}

Json subgroup_json(const SubgroupOfR& g) {
  Json out;
  out["field"] = g.field()->describe();
  out["generators"] = arr(g.generators(), ex_elem);
  out["denominator"] = ex_int(g.lattice().denominator());
  Json rows = Json::array();
  const IntMat& b = g.lattice().int_basis();
  for (int i = 0; i < b.rows(); ++i) rows.push_back(arr(b.row(i), ex_int));
  out["basis"] = rows;
  return out;
}

std::string quotient_name(const QuotientInvariants& q) {
  std::vector<std::string> parts;
  if (q.free_rank == 1) parts.push_back("Z");
  if (q.free_rank > 1) parts.push_back("Z^" + std::to_string(q.free_rank));
  for (const Int& f : q.factors)
    if (f > 1) parts.push_back("Z/" + to_string(f) + "Z");
  if (parts.empty()) return "trivial";
  std::string s = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) s += " x " + parts[i];
  return s;
}

const char* verdict_kind_name(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::RefutedNecessary: return "RefutedNecessary";
    case Verdict::Kind::CertifiedEigen: return "CertifiedEigen";
    default: return "PassesUpTo";
  }
}

Json verdict_json(const Verdict& v) {
  Json out;
  out["kind"] = verdict_kind_name(v.kind);
  out["reason"] = Verdict::reason_name(v.reason);
  out["level"] = v.level;
  return out;
}

std::string verdict_text(const Verdict& v) {
  std::string s = verdict_kind_name(v.kind);
  if (v.kind == Verdict::Kind::PassesUpTo) return s + "(" + std::to_string(v.level) + ")";
  s += std::string(" (") + Verdict::reason_name(v.reason) + ")";
  if (v.level > 0) s += " at level " + std::to_string(v.level);
  return s;
}

FieldPtr field_from_text(const std::string& text) {
  IPoly mp = poly_from_string(text);
  if (degree(mp) < 1) throw Error("field polynomial must be non-constant");
  if (degree(mp) == 1) return NumberField::rationals();
  auto iso = isolate_largest_real_root(squarefree_part(mp));
  return NumberField::create(std::move(mp), iso.first, iso.second);
}

// Comma split that ignores commas inside brackets, so coords expressions
// survive.
std::vector<std::string> split_exprs(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '[' || c == '(') ++depth;
    if (c == ']' || c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<FieldElement> parse_elem_list(const std::string& s, const char* what) {
  std::vector<FieldElement> out;
  for (const std::string& piece : split_exprs(s)) {
    if (piece.find_first_not_of(" \t") == std::string::npos)
      throw Error(std::string(what) + ": empty entry");
    out.push_back(parse_real(piece));
  }
  return out;
}

struct CmdOut {
  Json& out;
  std::ostringstream text;
  std::ostringstream& log;
  int code = 0;
};

void check_battery_params(const RunConfig& cfg) {
  if (cfg.m < 1) throw Error("m must be >= 1");
  if (cfg.N <= cfg.m) throw Error("N must exceed m");
}

void cmd_measures(const RunConfig& cfg, CmdOut& o) {
  if (cfg.level < 1) throw Error("level must be >= 1");
  Tower t = make_tower(cfg, std::max(cfg.levels, cfg.level), o.log);
  o.out["tower"] = tower_json(t);
  o.out["level"] = cfg.level;
  o.out["heights"] = arr(t.heights(cfg.level), ex_int);
  o.text << "tower " << t.name() << ": " << t.levels() << " levels, continuation "
         << continuation_name(t.continuation()) << "\n";

  bool exact_ok = false;
  try {
    Stopwatch sw;
    ExactMeasure em = ExactMeasure::compute(t);
    MeasureVector mv = em.at_level(cfg.level);
    o.log << "[time] exact measure " << sw.ms() << " ms\n";
    Json ej;
    ej["field"] = em.field()->describe();
    ej["perron_root"] = ex_elem(em.perron_root());
    ej["mu"] = arr(mv.values, ex_elem);
    o.out["exact"] = ej;
    exact_ok = true;
    o.text << "exact measure at level " << cfg.level << " over " << em.field()->describe()
           << ":\n";
    for (size_t k = 0; k < mv.values.size(); ++k)
      o.text << "  mu[" << (k + 1) << "] = " << mv.values[k].str() << "\n";
  } catch (const Error& e) {
    o.out["exact"] = nullptr;
    o.log << "[note] exact measure unavailable: " << e.what() << "\n";
    o.text << "exact measure unavailable (" << e.what() << ")\n";
  }

  Rat eps = rat_from_string(cfg.eps);
  if (eps <= 0) throw Error("eps must be positive");
  Stopwatch sw;
  MeasureEnclosure enc = measure_enclosure(t, cfg.level, eps);
  o.log << "[time] enclosure " << sw.ms() << " ms\n";
  Json ej;
  ej["eps"] = ex_rat(eps);
  ej["width_ok"] = enc.width_ok;
  ej["values"] = arr(enc.values, iv);
  o.out["enclosure"] = ej;
  o.text << "enclosure at level " << cfg.level << " (eps = " << to_string(eps)
         << (enc.width_ok ? "" : ", width target not met at built depth") << "):\n";
  for (size_t k = 0; k < enc.values.size(); ++k)
    o.text << "  mu[" << (k + 1) << "] in " << iv_text(enc.values[k]) << "\n";

  ErgodicityCertificate cert = ergodicity_certificate(t);
  const char* verdict =
      cert.verdict == ErgodicityCertificate::Verdict::UniquelyErgodicCertified
          ? "UniquelyErgodicCertified"
          : "Unknown";
  const char* reason = cert.reason == ErgodicityCertificate::Reason::StationaryPrimitive
                           ? "stationary-primitive"
                       : cert.reason == ErgodicityCertificate::Reason::ProjectiveContraction
                           ? "projective-contraction"
                           : "none";
  Json cj;
  cj["verdict"] = verdict;
  cj["reason"] = reason;
  cj["rho_bound"] = ex_rat(cert.rho);
  o.out["ergodicity"] = cj;
  o.text << "ergodicity: " << verdict << " (" << reason << ")\n";
  (void)exact_ok;
}

void apply_expect_eigen(const RunConfig& cfg, const Verdict& v, CmdOut& o) {
  if (!cfg.expect) return;
  const std::string& e = *cfg.expect;
  bool ok;
  if (e == "eigen")
    ok = v.kind == Verdict::Kind::CertifiedEigen;
  else if (e == "refuted")
    ok = v.kind == Verdict::Kind::RefutedNecessary;
  else if (e == "passes")
    ok = v.kind == Verdict::Kind::PassesUpTo;
  else
    throw Error("bad --expect value '" + e + "' (eigen|refuted|passes)");
  o.out["expect"] = Json{{"wanted", e}, {"satisfied", ok}};
  o.text << "expect " << e << ": " << (ok ? "satisfied" : "NOT satisfied") << "\n";
  if (!ok) o.code = 2;
}

void cmd_eigen(const RunConfig& cfg, CmdOut& o) {
  if (!cfg.alpha) throw Error("eigen needs --alpha");
  check_battery_params(cfg);
  FieldElement alpha = parse_real(*cfg.alpha);
  int levels = std::max({cfg.levels, cfg.N + 1, cfg.m + 2});
  Tower t = make_tower(cfg, levels, o.log);
  ExactMeasure mu = ExactMeasure::compute(t);
  EigenParams params;
  params.m = cfg.m;
  params.N = cfg.N;
  params.depth = cfg.depth;
  params.trust_declared = cfg.trust_catalog;
  Stopwatch sw;
  CriteriaReport r = eigen_verdict(t, mu, alpha, params);
  o.log << "[time] battery " << sw.ms() << " ms\n";

  o.out["tower"] = tower_json(t);
  o.out["alpha"] = ex_elem(r.alpha);
  o.out["m"] = cfg.m;
  o.out["N"] = cfg.N;
  o.out["verdict"] = verdict_json(r.verdict);
  if (r.decomposition) {
    Json dj;
    dj["m"] = r.decomposition->m;
    dj["w"] = arr(r.decomposition->w, ex_int);
    dj["v"] = arr(r.decomposition->v, ex_elem);
    o.out["decomposition"] = dj;
  }
  if (r.decomposition || r.orthogonality_exact) {
    Json oj;
    oj["at_m"] = r.orthogonality_at_m;
    oj["at_m_plus_1"] = r.orthogonality_at_m1;
    oj["exact"] = r.orthogonality_exact ? Json(*r.orthogonality_exact) : Json(nullptr);
    if (r.orthogonality_witness) oj["witness"] = arr(*r.orthogonality_witness, ex_int);
    o.out["orthogonality"] = oj;
  }
  if (r.summability) {
    const SummabilityReport& s = *r.summability;
    Json sj;
    sj["m"] = s.m;
    sj["N"] = s.N;
    sj["terms"] = arr(s.terms, iv);
    sj["partial_sums"] = arr(s.partial_sums, iv);
    sj["rho_hat"] = s.rho_hat ? iv(*s.rho_hat) : Json(nullptr);
    sj["divergence_evidence"] = s.divergence_evidence;
    sj["divergence_certified"] = s.divergence_certified;
    o.out["summability"] = sj;
  }
  if (r.suffix) {
    const SuffixReport& s = *r.suffix;
    Json sj;
    sj["N"] = s.N;
    sj["deltas"] = arr(s.deltas, iv);
    sj["nonconvergence_evidence"] = s.nonconvergence_evidence;
    sj["nonconvergence_certified"] = s.nonconvergence_certified;
    o.out["suffix"] = sj;
  }
  if (r.rational) {
    Json rj;
    rj["status"] = r.rational->status == RationalMembership::Status::MemberAtLevel
                       ? "MemberAtLevel"
                   : r.rational->status == RationalMembership::Status::CertifiedNonMember
                       ? "CertifiedNonMember"
                       : "UnknownUpTo";
    rj["level"] = r.rational->level;
    rj["preperiod"] = r.rational->preperiod;
    rj["period"] = r.rational->period;
    o.out["rational"] = rj;
  }

  o.text << "tower " << t.name() << ", alpha = " << r.alpha.str() << "\n";
  o.text << "verdict: " << verdict_text(r.verdict) << "\n";
  if (r.rational)
    o.text << "rational route: "
           << std::string(o.out["rational"]["status"].get<std::string>()) << " at depth "
           << r.rational->level << "\n";
  if (r.decomposition)
    o.text << "orthogonality at m, m+1: " << (r.orthogonality_at_m ? "yes" : "no") << ", "
           << (r.orthogonality_at_m1 ? "yes" : "no") << "\n";
  if (r.summability && !r.summability->terms.empty()) {
    o.text << "summability: last term " << iv_text(r.summability->terms.back());
    if (r.summability->rho_hat) o.text << ", rho_hat " << iv_text(*r.summability->rho_hat);
    o.text << (r.summability->divergence_certified ? ", divergence certified" : "") << "\n";
  }
  if (r.suffix && !r.suffix->deltas.empty())
    o.text << "suffix: delta_" << r.suffix->N - 1 << " " << iv_text(r.suffix->deltas.back())
           << (r.suffix->nonconvergence_certified ? ", nonconvergence certified" : "")
           << "\n";
  apply_expect_eigen(cfg, r.verdict, o);
}

void cmd_rational(const RunConfig& cfg, CmdOut& o) {
  if (!cfg.frac) throw Error("rational needs --frac p/q");
  if (cfg.depth < 1) throw Error("depth must be >= 1");
  Rat pq = rat_from_string(*cfg.frac);
  Tower t = make_tower(cfg, std::max(cfg.levels, 2), o.log);
  Stopwatch sw;
  RationalMembership r = rational_member(t, pq.get_num(), pq.get_den(), cfg.depth);
  o.log << "[time] scan " << sw.ms() << " ms\n";
  const char* status = r.status == RationalMembership::Status::MemberAtLevel
                           ? "MemberAtLevel"
                       : r.status == RationalMembership::Status::CertifiedNonMember
                           ? "CertifiedNonMember"
                           : "UnknownUpTo";
  o.out["tower"] = tower_json(t);
  o.out["frac"] = ex_rat(pq);
  o.out["status"] = status;
  o.out["level"] = r.level;
  if (r.status == RationalMembership::Status::CertifiedNonMember) {
    o.out["preperiod"] = r.preperiod;
    o.out["period"] = r.period;
  }
  o.text << "tower " << t.name() << ", candidate " << to_string(pq) << "\n";
  o.text << "status: " << status;
  if (r.status == RationalMembership::Status::MemberAtLevel)
    o.text << " (denominator divides all heights at level " << r.level << ")";
  if (r.status == RationalMembership::Status::CertifiedNonMember)
    o.text << " (heights mod q cycle with pre-period " << r.preperiod << ", period "
           << r.period << ", never the zero vector)";
  if (r.status == RationalMembership::Status::UnknownUpTo)
    o.text << " (scanned " << r.level << " levels)";
  o.text << "\n";
  if (cfg.expect) {
    const std::string& e = *cfg.expect;
    bool ok;
    if (e == "member")
      ok = r.status == RationalMembership::Status::MemberAtLevel;
    else if (e == "nonmember" || e == "refuted")
      ok = r.status == RationalMembership::Status::CertifiedNonMember;
    else
      throw Error("bad --expect value '" + e + "' (member|nonmember)");
    o.out["expect"] = Json{{"wanted", e}, {"satisfied", ok}};
    o.text << "expect " << e << ": " << (ok ? "satisfied" : "NOT satisfied") << "\n";
    if (!ok) o.code = 2;
  }
}

void cmd_invariants(const RunConfig& cfg, CmdOut& o) {
  if (cfg.level < 1) throw Error("level must be >= 1");
  Tower t = make_tower(cfg, std::max({cfg.levels, cfg.level, 2}), o.log);
  ExactMeasure mu = ExactMeasure::compute(t);
  SubgroupOfR img = image_group(t, mu, cfg.level);
  o.out["tower"] = tower_json(t);
  o.out["level"] = cfg.level;
  o.out["image"] = subgroup_json(img);
  o.text << "tower " << t.name() << "\n";
  o.text << "image subgroup approximant at level " << cfg.level << " over "
         << img.field()->describe() << ", generators:\n";
  for (const FieldElement& g : img.generators()) o.text << "  " << g.str() << "\n";

  Json ij;
  try {
    InfinitesimalReport inf = infinitesimal_report(t, mu);
    bool trivial = inf.verdict == InfinitesimalReport::Verdict::Trivial;
    ij["verdict"] = trivial ? "Trivial" : "NonTrivial";
    Json rows = Json::array();
    for (int i = 0; i < inf.kernel_basis.rows(); ++i)
      rows.push_back(arr(inf.kernel_basis.row(i), ex_rat));
    ij["kernel_basis"] = rows;
    if (inf.witness) ij["witness"] = arr(*inf.witness, ex_int);
    o.text << "infinitesimals: " << (trivial ? "Trivial" : "NonTrivial");
    if (inf.witness) o.text << ", witness " << vec_text(*inf.witness);
    o.text << "\n";
  } catch (const Error& e) {
    ij["verdict"] = "Undecided";
    ij["note"] = e.what();
    o.text << "infinitesimals: Undecided (" << e.what() << ")\n";
  }
  o.out["infinitesimals"] = ij;
}

void cmd_torsion(const RunConfig& cfg, CmdOut& o) {
  SubgroupOfR image = [&] {
    if (cfg.catalog) {
      if (catalog_is_tower(*cfg.catalog))
        throw Error("catalog entry '" + *cfg.catalog +
                    "' is a tower; torsion takes group-level entries or explicit generators");
      return catalog_groups(*cfg.catalog, cfg.level).image;
    }
    if (!cfg.igens || !cfg.egens)
      throw Error("torsion needs a group-level catalog entry or --igens and --egens");
    std::vector<FieldElement> ig = parse_elem_list(*cfg.igens, "igens");
    FieldPtr f;
    if (cfg.field) {
      f = field_from_text(*cfg.field);
    } else {
      FieldElement acc{Rat(0)};
      for (const FieldElement& x : ig) acc = join(acc, x).a;
      for (const FieldElement& x : parse_elem_list(*cfg.egens, "egens"))
        acc = join(acc, x).a;
      f = acc.field();
    }
    std::vector<FieldElement> lifted;
    for (const FieldElement& x : ig) {
      auto e = try_embed(x, f);
      if (!e) throw Error("generator " + x.str() + " does not lie in the stated field");
      lifted.push_back(*e);
    }
    return SubgroupOfR::from_elements(f, lifted);
  }();
  SubgroupOfR eigen = [&] {
    if (cfg.catalog) return catalog_groups(*cfg.catalog, cfg.level).eigen;
    std::vector<FieldElement> lifted;
    for (const FieldElement& x : parse_elem_list(*cfg.egens, "egens")) {
      auto e = try_embed(x, image.field());
      if (!e) throw Error("generator " + x.str() + " does not lie in the stated field");
      lifted.push_back(*e);
    }
    return SubgroupOfR::from_elements(image.field(), lifted);
  }();

  Stopwatch sw;
  QuotientInvariants q = torsion_quotient(image, eigen);
  o.log << "[time] quotient " << sw.ms() << " ms\n";
  bool torsion_free = true;
  for (const Int& f : q.factors)
    if (f > 1) torsion_free = false;
  o.out["field"] = image.field()->describe();
  if (cfg.catalog) {
    o.out["catalog"] = *cfg.catalog;
    o.out["level"] = cfg.level;
    o.out["description"] = catalog_groups(*cfg.catalog, cfg.level).description;
  }
  o.out["image"] = subgroup_json(image);
  o.out["eigen"] = subgroup_json(eigen);
  o.out["invariant_factors"] = arr(q.factors, ex_int);
  o.out["free_rank"] = q.free_rank;
  o.out["torsion_free"] = torsion_free;
  o.out["quotient"] = quotient_name(q);
  o.text << "I/E invariant factors: (";
  for (size_t i = 0; i < q.factors.size(); ++i)
    o.text << (i ? "," : "") << to_string(q.factors[i]);
  o.text << "), free rank " << q.free_rank << "\n";
  o.text << "quotient " << quotient_name(q)
         << (torsion_free ? ": torsion free" : ": torsion present") << "\n";
}

void cmd_audit(const RunConfig& cfg, CmdOut& o) {
  check_battery_params(cfg);
  if (cfg.wbox < 0) throw Error("wbox must be >= 0");
  if (cfg.kmax < 2) throw Error("kmax must be >= 2");
  int levels = std::max({cfg.levels, cfg.N + 1, cfg.m + 2});
  Tower t = make_tower(cfg, levels, o.log);
  ExactMeasure mu = ExactMeasure::compute(t);
  int threads = resolve_threads(cfg, o.log);
  Stopwatch sw;
  AuditReport r = torsion_audit(t, mu, cfg.m, cfg.wbox, cfg.kmax, cfg.N, threads);
  o.log << "[time] audit " << sw.ms() << " ms\n";
  o.out["note"] =
      "the passing set stands in empirically for the eigenvalue group: "
      "a falsification harness, not a decision procedure";
  o.out["tower"] = tower_json(t);
  o.out["m"] = r.m;
  o.out["wbox"] = r.wbox;
  o.out["kmax"] = r.kmax;
  o.out["N"] = r.N;
  o.out["candidates"] = r.candidates;
  o.out["passing"] = r.passing;
  o.out["refuted"] = r.refuted;
  o.out["flags"] = arr(r.flags, [](const AuditFlag& f) {
    Json j;
    j["alpha"] = ex_elem(f.alpha);
    j["k"] = f.k;
    j["alpha_reason"] = Verdict::reason_name(f.alpha_reason);
    j["nonintegral_levels"] = f.nonintegral_levels;
    return j;
  });
  o.text << "audit " << t.name() << " (m=" << r.m << ", wbox=" << r.wbox
         << ", kmax=" << r.kmax << ", N=" << r.N << "): " << r.candidates
         << " candidates, " << r.passing << " passing, " << r.refuted << " refuted, "
         << r.flags.size() << " flag" << (r.flags.size() == 1 ? "" : "s") << "\n";
  for (const AuditFlag& f : r.flags)
    o.text << "  flagged: alpha = " << f.alpha.str() << ", k = " << f.k << " ("
           << Verdict::reason_name(f.alpha_reason) << "; " << f.nonintegral_levels
           << " non-integral levels)\n";
}

void cmd_suffixes(const RunConfig& cfg, CmdOut& o) {
  if (cfg.level < 1) throw Error("level must be >= 1");
  Tower t = make_tower(cfg, std::max(cfg.levels, cfg.level + 1), o.log);
  SuffixSet s = t.suffix_set(cfg.level);
  o.out["tower"] = tower_json(t);
  o.out["level"] = s.level;
  o.out["per_vertex"] = arr(s.per_vertex, [](const std::vector<std::vector<Int>>& tails) {
    return arr(tails, [](const std::vector<Int>& tv) { return arr(tv, ex_int); });
  });
  o.text << "suffix tail-count vectors of level-" << s.level << " sub-columns, per level-"
         << s.level + 1 << " vertex:\n";
  for (size_t l = 0; l < s.per_vertex.size(); ++l) {
    o.text << "  vertex " << (l + 1) << ":";
    for (const auto& tv : s.per_vertex[l]) o.text << " " << vec_text(tv);
    o.text << "\n";
  }
}

void cmd_diagnostic(const RunConfig& cfg, CmdOut& o) {
  check_battery_params(cfg);
  int levels = std::max({cfg.levels, cfg.N, cfg.m + 1});
  Tower t = make_tower(cfg, levels, o.log);
  ExactMeasure mu = ExactMeasure::compute(t);
  Stopwatch sw;
  ConvergenceDiagnostic d = convergence_diagnostic(t, mu, cfg.m, cfg.N);
  o.log << "[time] diagnostic " << sw.ms() << " ms\n";
  o.out["tower"] = tower_json(t);
  o.out["m"] = d.m;
  o.out["N"] = d.N;
  o.out["terms"] = arr(d.terms, iv);
  o.out["partial_sums"] = arr(d.partial_sums, iv);
  o.out["ratio_estimate"] = d.ratio_estimate ? iv(*d.ratio_estimate) : Json(nullptr);
  o.text << "row-convergence terms t_n, n = " << d.m + 1 << ".." << d.N << " for "
         << t.name() << "\n";
  if (!d.terms.empty()) {
    o.text << "last term " << iv_text(d.terms.back()) << ", partial sum "
           << iv_text(d.partial_sums.back()) << "\n";
    if (d.ratio_estimate) o.text << "decay ratio estimate " << iv_text(*d.ratio_estimate) << "\n";
  }
}

void cmd_catalog(const RunConfig&, CmdOut& o) {
  auto entries = catalog_entries();
  o.out["entries"] = arr(entries, [](const CatalogEntry& e) {
    Json j;
    j["name"] = e.name;
    j["kind"] = e.is_tower ? "tower" : "group-data";
    j["description"] = e.description;
    return j;
  });
  size_t w = 0;
  for (const auto& e : entries) w = std::max(w, e.name.size());
  for (const auto& e : entries) {
    o.text << e.name << std::string(w - e.name.size() + 2, ' ')
           << (e.is_tower ? "tower      " : "group-data ") << e.description << "\n";
  }
}

}  // namespace

CliResult run(const RunConfig& cfg) {
  CliResult res;
  std::ostringstream log;
  Stopwatch total;
  try {
    Json out;
    out["schema"] = kSchemaName;
    out["version"] = kToolVersion;
    out["command"] = cfg.command;
    CmdOut o{out, {}, log, 0};
    if (cfg.levels < 1) throw Error("levels must be >= 1");
    if (cfg.command == "measures")
      cmd_measures(cfg, o);
    else if (cfg.command == "eigen")
      cmd_eigen(cfg, o);
    else if (cfg.command == "rational")
      cmd_rational(cfg, o);
    else if (cfg.command == "invariants")
      cmd_invariants(cfg, o);
    else if (cfg.command == "torsion")
      cmd_torsion(cfg, o);
    else if (cfg.command == "audit")
      cmd_audit(cfg, o);
    else if (cfg.command == "suffixes")
      cmd_suffixes(cfg, o);
    else if (cfg.command == "diagnostic")
      cmd_diagnostic(cfg, o);
    else if (cfg.command == "catalog")
      cmd_catalog(cfg, o);
    else
      throw Error("unknown command: " + cfg.command);
    res.exit_code = o.code;
    res.json = out.dump(2) + "\n";
    res.text = o.text.str();
  } catch (const std::exception& e) {
    Json err;
    err["schema"] = kSchemaName;
    err["version"] = kToolVersion;
    err["error"] = e.what();
    res.exit_code = 1;
    res.json = err.dump(2) + "\n";
    res.text = std::string("error: ") + e.what() + "\n";
  }
  log << "[time] total " << total.ms() << " ms\n";
  res.log = log.str();
  return res;
}

}  // namespace cantor
