#include "cantor/measure.hpp"

#include <algorithm>

namespace cantor {

namespace {

// mu^T A as exact field arithmetic.
std::vector<FieldElement> vec_mat(const std::vector<FieldElement>& v, const IntMat& a) {
  if (int(v.size()) != a.rows()) throw Error("row vector and matrix shape mismatch");
  std::vector<FieldElement> out(size_t(a.cols()));
  for (int c = 0; c < a.cols(); ++c) {
    FieldElement acc(Rat(0));
    for (int r = 0; r < a.rows(); ++r)
      acc = acc + v[size_t(r)] * FieldElement(Rat(a(r, c)));
    out[size_t(c)] = acc;
  }
  return out;
}

std::vector<Int> mat_vec(const IntMat& a, const std::vector<Int>& v) { return a.mul_vec(v); }

// One kernel vector of a singular matrix over the field, via full
// row reduction.  Throws if the matrix is nonsingular.
std::vector<FieldElement> kernel_vector(std::vector<std::vector<FieldElement>> a) {
  int n = int(a.size());
  int cols = n == 0 ? 0 : int(a[0].size());
  std::vector<int> pivot_col_of_row;
  std::vector<bool> is_pivot(size_t(cols), false);
  int r = 0;
  for (int c = 0; c < cols && r < n; ++c) {
    int pr = -1;
    for (int i = r; i < n; ++i)
      if (!a[size_t(i)][size_t(c)].is_zero()) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    std::swap(a[size_t(r)], a[size_t(pr)]);
    FieldElement inv = FieldElement(Rat(1)) / a[size_t(r)][size_t(c)];
    for (int j = c; j < cols; ++j) a[size_t(r)][size_t(j)] = a[size_t(r)][size_t(j)] * inv;
    for (int i = 0; i < n; ++i) {
      if (i == r) continue;
      FieldElement f = a[size_t(i)][size_t(c)];
      if (f.is_zero()) continue;
      for (int j = c; j < cols; ++j)
        a[size_t(i)][size_t(j)] = a[size_t(i)][size_t(j)] - f * a[size_t(r)][size_t(j)];
    }
    pivot_col_of_row.push_back(c);
    is_pivot[size_t(c)] = true;
    ++r;
  }
  int free_col = -1;
  for (int c = 0; c < cols; ++c)
    if (!is_pivot[size_t(c)]) {
      free_col = c;
      break;
    }
  if (free_col < 0) throw Error("matrix is nonsingular; no kernel vector");
  std::vector<FieldElement> x(size_t(cols), FieldElement(Rat(0)));
  x[size_t(free_col)] = FieldElement(Rat(1));
  for (int i = 0; i < int(pivot_col_of_row.size()); ++i)
    x[size_t(pivot_col_of_row[size_t(i)])] = -a[size_t(i)][size_t(free_col)];
  return x;
}

struct CyclePlan {
  int preperiod = 0;                // levels N+1 .. N+preperiod lead in
  std::vector<IntMat> lead_in;      // matrices for those levels
  std::vector<IntMat> cycle;        // matrices around the cycle, in level order
};

CyclePlan continuation_cycle(const Tower& t) {
  CyclePlan plan;
  int s0 = t.continuation_state(t.levels());
  std::vector<int> seen{s0};
  std::vector<IntMat> mats;
  int s = s0;
  for (;;) {
    auto [m, ns] = t.continuation_next(s);
    mats.push_back(std::move(m));
    auto it = std::find(seen.begin(), seen.end(), ns);
    if (it != seen.end()) {
      int idx = int(it - seen.begin());
      plan.preperiod = idx;
      plan.lead_in.assign(mats.begin(), mats.begin() + idx);
      plan.cycle.assign(mats.begin() + idx, mats.end());
      return plan;
    }
    seen.push_back(ns);
    s = ns;
  }
}

// Perron data of the cycle product: the field, the root, and the strictly
// positive left eigenvector.
struct PerronData {
  FieldPtr field;
  FieldElement root;
  std::vector<FieldElement> left;
};

PerronData perron_of(const IntMat& q, int max_field_degree) {
  if (!is_primitive(q)) throw Error("level cycle matrix is not primitive");
  IPoly cp = char_poly(q);
  IPoly sf = squarefree_part(cp);
  auto [lo0, hi0] = isolate_largest_real_root(sf);
  RootFactor rf = minimal_polynomial_of_root(sf, lo0, hi0, max_field_degree);

  PerronData out{nullptr, FieldElement(Rat(0)), {}};
  int deg = degree(rf.minpoly);
  if (deg == 1) {
    out.field = NumberField::rationals();
    out.root = FieldElement(Rat(-rf.minpoly[0]));
  } else if (deg == 2) {
    // Canonical quadratic presentation: express the larger root of
    // x^2 + b x + c over Q(sqrt(squarefree part of b^2 - 4c)).
    Int b = rf.minpoly[1], c = rf.minpoly[0];
    Int disc = b * b - 4 * c;
    if (disc <= 0) throw Error("quadratic Perron factor without real roots");
    auto [s, f] = squarefree_decompose(disc);
    if (f == 1) throw Error("reducible quadratic escaped the factor search");
    out.field = NumberField::sqrt_field(f);
    out.root = FieldElement(out.field, {make_rat(-b, 2), make_rat(s, 2)});
  } else {
    out.field = NumberField::create(rf.minpoly, rf.lo, rf.hi);
    out.root = FieldElement::theta(out.field);
  }

  int n = q.rows();
  std::vector<std::vector<FieldElement>> a(
      static_cast<size_t>(n), std::vector<FieldElement>(static_cast<size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      FieldElement v(Rat(q(j, i)));  // transpose: left eigenvector
      if (i == j) v = v - out.root;
      a[size_t(i)][size_t(j)] = v;
    }
  out.left = kernel_vector(std::move(a));
  if (out.left[0].sign() < 0)
    for (auto& x : out.left) x = -x;
  for (const auto& x : out.left)
    if (x.sign() <= 0) throw Error("left Perron vector is not strictly positive");
  return out;
}

}  // namespace

ExactMeasure ExactMeasure::compute(const Tower& t, int max_field_degree) {
  ExactMeasure m;
  m.tower_storage_ = t;
  int n_levels = t.levels();

  if (t.continuation() == Tower::Continuation::None) {
    if (!t.is_scalar())
      throw Error("exact measure needs a scalar tower or a known continuation");
    m.field_ = NumberField::rationals();
    m.perron_root_ = FieldElement(Rat(0));
    const auto& h = t.heights(n_levels);
    m.mu_hat_ = {FieldElement(make_rat(Int(1), h[0]))};
    return m;
  }

  CyclePlan plan = continuation_cycle(t);
  IntMat q = plan.cycle[0];
  for (size_t i = 1; i < plan.cycle.size(); ++i) q = plan.cycle[i] * q;
  PerronData pd = perron_of(q, max_field_degree);

  // Heights at the aligned level N + preperiod.
  std::vector<Int> h = t.heights(n_levels);
  for (const auto& a : plan.lead_in) h = mat_vec(a, h);
  FieldElement norm(Rat(0));
  for (size_t i = 0; i < pd.left.size(); ++i)
    norm = norm + pd.left[i] * FieldElement(Rat(h[i]));
  std::vector<FieldElement> mu(pd.left.size());
  for (size_t i = 0; i < pd.left.size(); ++i) mu[i] = pd.left[i] / norm;

  // Pull back through the lead-in to the deepest built level.
  for (size_t i = plan.lead_in.size(); i-- > 0;) mu = vec_mat(mu, plan.lead_in[i]);

  m.field_ = pd.field;
  m.perron_root_ = pd.root;
  m.mu_hat_ = std::move(mu);
  return m;
}

MeasureVector ExactMeasure::at_level(int n) const {
  const Tower& t = *tower();
  if (n < 1 || n > t.levels()) throw Error("level out of range");
  MeasureVector out;
  out.level = n;
  if (n == t.levels()) {
    out.values = mu_hat_;
    return out;
  }
  out.values = vec_mat(mu_hat_, t.product(t.levels(), n));
  return out;
}

MeasureEnclosure measure_enclosure(const Tower& t, int n, const Rat& eps, int depth) {
  if (n < 1 || n > t.levels()) throw Error("level out of range");
  if (eps <= 0) throw Error("enclosure width must be positive");
  int deep = depth <= 0 ? t.levels() : std::min(t.levels(), n + depth);
  const auto& hn = t.heights(n);

  long prec = 8;
  Rat target = eps / 4;
  while (make_rat(Int(1), Int(1) << prec) > target && prec < 4096) prec += 8;

  MeasureEnclosure out;
  out.level = n;
  out.values.reserve(size_t(t.C(n)));
  bool ok = true;
  if (deep == n) {
    for (int k = 0; k < t.C(n); ++k) {
      Rat hi = make_rat(Int(1), hn[size_t(k)]);
      Interval iv = Interval::enclose(Rat(0), hi, prec);
      if (iv.hi.to_rat() - iv.lo.to_rat() > eps) ok = false;
      out.values.push_back(iv);
    }
    out.width_ok = ok;
    return out;
  }

  IntMat p = t.product(deep, n);
  const auto& hd = t.heights(deep);
  for (int k = 0; k < t.C(n); ++k) {
    Rat lo, hi;
    for (int l = 0; l < t.C(deep); ++l) {
      Rat v = make_rat(p(l, k), hd[size_t(l)]);
      if (l == 0 || v < lo) lo = v;
      if (l == 0 || v > hi) hi = v;
    }
    Interval iv = Interval::enclose(lo, hi, prec);
    if (iv.hi.to_rat() - iv.lo.to_rat() > eps) ok = false;
    out.values.push_back(iv);
  }
  out.width_ok = ok;
  return out;
}

ErgodicityCertificate ergodicity_certificate(const Tower& t, int) {
  ErgodicityCertificate cert;
  if (t.is_scalar()) {
    cert.verdict = ErgodicityCertificate::Verdict::UniquelyErgodicCertified;
    cert.reason = ErgodicityCertificate::Reason::ProjectiveContraction;
    cert.rho = 0;
    return cert;
  }
  if (t.continuation() != Tower::Continuation::None) {
    CyclePlan plan = continuation_cycle(t);
    IntMat q = plan.cycle[0];
    for (size_t i = 1; i < plan.cycle.size(); ++i) q = plan.cycle[i] * q;
    if (is_primitive(q)) {
      cert.verdict = ErgodicityCertificate::Verdict::UniquelyErgodicCertified;
      cert.reason = ErgodicityCertificate::Reason::StationaryPrimitive;
      return cert;
    }
  }
  return cert;
}

}  // namespace cantor
