#include "cantor/numberfield.hpp"

#include <cctype>
#include <sstream>

namespace cantor {

namespace {

// theta-interval arithmetic over exact rationals; only ring operations,
// so no rounding anywhere.
struct QInterval {
  Rat lo, hi;
};

QInterval qi_add(const QInterval& a, const QInterval& b) { return {a.lo + b.lo, a.hi + b.hi}; }

QInterval qi_mul(const QInterval& a, const QInterval& b) {
  Rat p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  Rat lo = std::min(std::min(p1, p2), std::min(p3, p4));
  Rat hi = std::max(std::max(p1, p2), std::max(p3, p4));
  return {lo, hi};
}

QInterval qi_eval(const std::vector<Rat>& coords, const QInterval& theta) {
  QInterval acc{Rat(0), Rat(0)};
  for (size_t i = coords.size(); i-- > 0;) {
    acc = qi_mul(acc, theta);
    acc = qi_add(acc, QInterval{coords[i], coords[i]});
  }
  return acc;
}

}  // namespace

FieldPtr NumberField::rationals() {
  static FieldPtr q = [] {
    auto f = std::shared_ptr<NumberField>(new NumberField());
    f->degree_ = 1;
    f->minpoly_ = {Int(0), Int(1)};  // x
    f->iso_lo_ = Rat(-1);
    f->iso_hi_ = Rat(1);
    f->root_lo_ = Rat(-1);
    f->root_hi_ = Rat(1);
    return FieldPtr(f);
  }();
  return q;
}

FieldPtr NumberField::create(IPoly minpoly, Rat root_lo, Rat root_hi,
                             bool assume_irreducible) {
  normalize(minpoly);
  int d = cantor::degree(minpoly);
  if (d < 1) throw Error("minimal polynomial must be non-constant");
  if (!is_monic(minpoly)) throw Error("minimal polynomial must be monic");
  if (d == 1) return rationals();
  if (d > 4 && !assume_irreducible)
    throw Error("irreducibility checking limited to degree <= 4; pass assume_irreducible");
  if (d <= 4 && !assume_irreducible && !irreducible_le4(minpoly))
    throw Error("reducible minimal polynomial: " + poly_to_string(minpoly));
  if (root_hi < root_lo) throw Error("root interval endpoints out of order");
  Rat flo = eval(minpoly, root_lo), fhi = eval(minpoly, root_hi);
  bool bracket = sign_of(flo) * sign_of(fhi) < 0 || fhi == 0;
  if (!bracket) throw Error("root interval has no sign change");
  if (!isolates_one_root(minpoly, root_lo, root_hi))
    throw Error("root interval does not isolate a single root");
  auto f = std::shared_ptr<NumberField>(new NumberField());
  f->degree_ = d;
  f->minpoly_ = std::move(minpoly);
  f->root_lo_ = std::move(root_lo);
  f->root_hi_ = std::move(root_hi);
  f->iso_lo_ = f->root_lo_;
  f->iso_hi_ = f->root_hi_;
  return f;
}

FieldPtr NumberField::sqrt_field(const Int& d) {
  if (d <= 0) throw Error("sqrt field needs a positive integer");
  auto [s, fpart] = squarefree_decompose(d);
  if (fpart == 1) throw Error("sqrt of a perfect square is rational");
  // x^2 - fpart, positive root; [0, fpart] brackets it and excludes -sqrt.
  IPoly mp = {Int(-fpart), Int(0), Int(1)};
  return create(std::move(mp), Rat(0), Rat(fpart));
}

std::pair<Rat, Rat> NumberField::root_interval() const {
  std::lock_guard<std::mutex> lock(mu_);
  return {root_lo_, root_hi_};
}

std::pair<Rat, Rat> NumberField::refine_root(const Rat& width) const {
  std::lock_guard<std::mutex> lock(mu_);
  while (root_hi_ - root_lo_ > width) {
    auto [lo, hi] = bisect_root_interval(minpoly_, root_lo_, root_hi_);
    root_lo_ = lo;
    root_hi_ = hi;
  }
  return {root_lo_, root_hi_};
}

std::string NumberField::describe() const {
  if (is_rational()) return "Q";
  return "Q(theta), theta root of " + poly_to_string(minpoly_);
}

bool same_field(const NumberField& a, const NumberField& b) {
  if (&a == &b) return true;
  if (a.degree_ != b.degree_) return false;
  if (a.degree_ == 1) return true;
  if (a.minpoly_ != b.minpoly_) return false;
  // Same minimal polynomial: equal iff the isolating intervals pin the
  // same root.  Simple roots change sign, so a common root forces a sign
  // change (or endpoint zero) on the intersection.
  auto [alo, ahi] = a.root_interval();
  auto [blo, bhi] = b.root_interval();
  Rat lo = std::max(alo, blo), hi = std::min(ahi, bhi);
  if (hi < lo) return false;
  Rat flo = eval(a.minpoly_, lo), fhi = eval(a.minpoly_, hi);
  if (flo == 0 || fhi == 0) return true;
  return sign_of(flo) * sign_of(fhi) < 0;
}

FieldElement::FieldElement(const Rat& q) : field_(NumberField::rationals()), coords_{q} {
  coords_[0].canonicalize();
}

FieldElement::FieldElement(FieldPtr field, std::vector<Rat> coords)
    : field_(std::move(field)), coords_(std::move(coords)) {
  if (int(coords_.size()) != field_->degree())
    throw Error("coordinate count does not match field degree");
  // mpq_class(a, b) does not reduce; arithmetic assumes canonical form.
  for (auto& c : coords_) c.canonicalize();
}

FieldElement FieldElement::zero(const FieldPtr& f) {
  return FieldElement(f, std::vector<Rat>(size_t(f->degree()), Rat(0)));
}

FieldElement FieldElement::one(const FieldPtr& f) {
  auto e = zero(f);
  e.coords_[0] = 1;
  return e;
}

FieldElement FieldElement::theta(const FieldPtr& f) {
  if (f->degree() < 2) throw Error("theta undefined over Q");
  auto e = zero(f);
  e.coords_[1] = 1;
  return e;
}

bool FieldElement::is_zero() const {
  for (const auto& c : coords_)
    if (c != 0) return false;
  return true;
}

bool FieldElement::is_rational() const {
  for (size_t i = 1; i < coords_.size(); ++i)
    if (coords_[i] != 0) return false;
  return true;
}

Rat FieldElement::as_rat() const {
  if (!is_rational()) throw Error("element is not rational");
  return coords_[0];
}

Joined join(const FieldElement& a, const FieldElement& b) {
  if (same_field(a.field(), b.field())) {
    if (a.field()->is_rational()) return {a, b};
    // Re-home b onto a's field pointer so downstream ops share one object.
    return {a, FieldElement(a.field(), b.coords())};
  }
  if (a.field()->is_rational()) {
    std::vector<Rat> cc(size_t(b.field()->degree()), Rat(0));
    cc[0] = a.coords()[0];
    return {FieldElement(b.field(), cc), b};
  }
  if (b.field()->is_rational()) {
    std::vector<Rat> cc(size_t(a.field()->degree()), Rat(0));
    cc[0] = b.coords()[0];
    return {a, FieldElement(a.field(), cc)};
  }
  throw Error("field mismatch: " + a.field()->describe() + " vs " + b.field()->describe());
}

std::optional<FieldElement> try_embed(const FieldElement& x, const FieldPtr& f) {
  if (same_field(x.field(), f)) return FieldElement(f, x.coords());
  if (x.is_rational()) {
    std::vector<Rat> cc(size_t(f->degree()), Rat(0));
    cc[0] = x.coords()[0];
    return FieldElement(f, cc);
  }
  if (x.field()->degree() == 2 && f->degree() == 2) return std::nullopt;
  if (f->is_rational()) return std::nullopt;
  throw Error("cannot decide embedding between " + x.field()->describe() + " and " +
              f->describe());
}

namespace {

std::vector<Rat> reduce_mod_minpoly(std::vector<Rat> c, const IPoly& mp, int d) {
  // mp monic: theta^d = -(mp[0] + ... + mp[d-1] theta^{d-1}).
  for (size_t i = c.size(); i-- > size_t(d);) {
    Rat lead = c[i];
    if (lead == 0) continue;
    c[i] = 0;
    for (int j = 0; j < d; ++j) c[i - size_t(d) + size_t(j)] -= lead * Rat(mp[size_t(j)]);
  }
  c.resize(size_t(d));
  return c;
}

}  // namespace

FieldElement operator+(const FieldElement& a0, const FieldElement& b0) {
  auto [a, b] = join(a0, b0);
  std::vector<Rat> c(a.coords());
  for (size_t i = 0; i < c.size(); ++i) c[i] += b.coords()[i];
  return FieldElement(a.field(), std::move(c));
}

FieldElement operator-(const FieldElement& a0, const FieldElement& b0) {
  auto [a, b] = join(a0, b0);
  std::vector<Rat> c(a.coords());
  for (size_t i = 0; i < c.size(); ++i) c[i] -= b.coords()[i];
  return FieldElement(a.field(), std::move(c));
}

FieldElement FieldElement::operator-() const {
  std::vector<Rat> c(coords_);
  for (auto& x : c) x = -x;
  return FieldElement(field_, std::move(c));
}

FieldElement operator*(const FieldElement& a0, const FieldElement& b0) {
  auto [a, b] = join(a0, b0);
  int d = a.field()->degree();
  std::vector<Rat> prod(size_t(2 * d - 1), Rat(0));
  for (int i = 0; i < d; ++i) {
    if (a.coords()[size_t(i)] == 0) continue;
    for (int j = 0; j < d; ++j)
      prod[size_t(i + j)] += a.coords()[size_t(i)] * b.coords()[size_t(j)];
  }
  return FieldElement(a.field(), reduce_mod_minpoly(std::move(prod), a.field()->minpoly(), d));
}

FieldElement operator/(const FieldElement& a0, const FieldElement& b0) {
  auto [a, b] = join(a0, b0);
  if (b.is_zero()) throw Error("division by zero");
  int d = a.field()->degree();
  if (d == 1) return FieldElement(a.coords()[0] / b.coords()[0]);
  QPoly bp(b.coords().begin(), b.coords().end());
  normalize(bp);
  QPoly mp = to_qpoly(a.field()->minpoly());
  auto ext = qp_ext_gcd(bp, mp);
  if (degree(ext.g) != 0) throw Error("non-invertible element; minimal polynomial reducible?");
  // ext.s / g is the inverse of b modulo the minimal polynomial (g == 1
  // after the monic normalization inside qp_ext_gcd).
  std::vector<Rat> inv(size_t(d), Rat(0));
  for (size_t i = 0; i < ext.s.size() && i < size_t(d); ++i) inv[i] = ext.s[i];
  FieldElement binv(a.field(), reduce_mod_minpoly(std::move(inv), a.field()->minpoly(), d));
  return a * binv;
}

bool operator==(const FieldElement& a0, const FieldElement& b0) {
  if (same_field(a0.field(), b0.field())) return a0.coords() == b0.coords();
  if (a0.is_rational() && b0.is_rational()) return a0.as_rat() == b0.as_rat();
  if (a0.is_rational() || b0.is_rational()) return false;
  // Distinct canonical quadratic presentations meet only in Q.
  if (a0.field()->degree() == 2 && b0.field()->degree() == 2) return false;
  throw Error("cannot compare elements of unrelated fields");
}

int FieldElement::sign() const {
  if (is_zero()) return 0;
  if (is_rational()) return sign_of(coords_[0]);
  auto [lo, hi] = field_->root_interval();
  for (int iter = 0; iter < 100000; ++iter) {
    QInterval enc = qi_eval(coords_, QInterval{lo, hi});
    if (sign_of(enc.lo) > 0) return 1;
    if (sign_of(enc.hi) < 0) return -1;
    Rat width = (hi - lo) / 2;
    std::tie(lo, hi) = field_->refine_root(width);
  }
  throw Error("sign determination did not converge");
}

Interval FieldElement::enclosure(long prec_bits) const {
  if (is_rational()) return Interval::enclose(coords_[0], coords_[0], prec_bits);
  Rat target = make_rat(1, Int(1) << std::min<long>(prec_bits + 2, 4096));
  auto [lo, hi] = field_->root_interval();
  for (int iter = 0; iter < 100000; ++iter) {
    QInterval enc = qi_eval(coords_, QInterval{lo, hi});
    if (enc.hi - enc.lo <= target) return Interval::enclose(enc.lo, enc.hi, prec_bits);
    std::tie(lo, hi) = field_->refine_root((hi - lo) / 2);
  }
  throw Error("enclosure did not converge");
}

std::pair<Int, FieldElement> FieldElement::nearest_integer_split() const {
  if (is_rational()) {
    Int z = rat_round_half_up(coords_[0]);
    return {z, *this - FieldElement(z)};
  }
  // Irrational value: x + 1/2 is never an integer, so the floor stabilizes
  // under refinement.
  auto [lo, hi] = field_->root_interval();
  for (int iter = 0; iter < 100000; ++iter) {
    QInterval enc = qi_eval(coords_, QInterval{lo, hi});
    Int fl = rat_floor(enc.lo + Rat(1, 2));
    Int fh = rat_floor(enc.hi + Rat(1, 2));
    if (fl == fh) return {fl, *this - FieldElement(fl)};
    std::tie(lo, hi) = field_->refine_root((hi - lo) / 2);
  }
  throw Error("nearest-integer split did not converge");
}

std::string FieldElement::str() const {
  if (is_rational()) return to_string(coords_[0]);
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < coords_.size(); ++i) {
    if (i) os << ",";
    os << to_string(coords_[i]);
  }
  os << "] over " << field_->describe();
  return os.str();
}

namespace {

struct SqrtTerm {
  Rat a;      // rational part
  Rat b;      // coefficient of sqrt(d)
  Int d = 0;  // 0 when purely rational
};

// (a + b*sqrt(d))/c and tolerant variants.
SqrtTerm parse_sqrt_expression(const std::string& text) {
  std::string t;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
  if (t.empty()) throw Error("empty expression");

  Rat denom = 1;
  // Trailing /c with c an integer literal.
  size_t slash = t.rfind('/');
  if (slash != std::string::npos && slash + 1 < t.size()) {
    bool digits = true;
    for (size_t i = slash + 1; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) digits = false;
    bool closes_paren = slash > 0 && t[slash - 1] == ')';
    bool has_sqrt_before = t.find("sqrt", 0) != std::string::npos && t.find("sqrt") < slash;
    if (digits && (closes_paren || has_sqrt_before)) {
      denom = Rat(Int(t.substr(slash + 1)));
      if (denom == 0) throw Error("zero denominator in expression");
      t = t.substr(0, slash);
    }
  }
  if (t.size() >= 2 && t.front() == '(' && t.back() == ')') t = t.substr(1, t.size() - 2);
  if (t.empty()) throw Error("empty expression");

  SqrtTerm out;
  size_t i = 0;
  bool any = false;
  while (i < t.size()) {
    int sign = 1;
    if (t[i] == '+' || t[i] == '-') {
      if (t[i] == '-') sign = -1;
      ++i;
    } else if (any) {
      throw Error("bad expression: " + text);
    }
    std::string num;
    while (i < t.size() && (std::isdigit(static_cast<unsigned char>(t[i])) || t[i] == '/'))
      num.push_back(t[i++]);
    if (i < t.size() && t[i] == '*') ++i;
    if (i + 4 < t.size() + 1 && t.compare(i, 4, "sqrt") == 0) {
      i += 4;
      if (i >= t.size() || t[i] != '(') throw Error("bad sqrt in expression: " + text);
      ++i;
      std::string darg;
      while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) darg.push_back(t[i++]);
      if (i >= t.size() || t[i] != ')') throw Error("bad sqrt in expression: " + text);
      ++i;
      if (darg.empty()) throw Error("bad sqrt in expression: " + text);
      Int d(darg);
      if (d <= 0) throw Error("sqrt argument must be positive");
      Rat coef = num.empty() ? Rat(1) : rat_from_string(num);
      if (out.d != 0 && out.d != d) throw Error("mixed sqrt arguments unsupported");
      out.d = d;
      out.b += sign * coef;
    } else {
      if (num.empty()) throw Error("bad expression: " + text);
      out.a += sign * rat_from_string(num);
    }
    any = true;
  }
  if (!any) throw Error("empty expression");
  out.a /= denom;
  out.b /= denom;
  return out;
}

}  // namespace

FieldElement parse_real(const std::string& text) {
  std::string t = text;
  // coords:[c0,c1,...]@minpoly
  const std::string kCoords = "coords:";
  auto strip = [](std::string s) {
    size_t b = s.find_first_not_of(" \t");
    size_t e = s.find_last_not_of(" \t");
    if (b == std::string::npos) return std::string();
    return s.substr(b, e - b + 1);
  };
  std::string st = strip(t);
  if (st.rfind(kCoords, 0) == 0) {
    size_t lb = st.find('[');
    size_t rb = st.find(']');
    size_t at = st.find('@');
    if (lb == std::string::npos || rb == std::string::npos || at == std::string::npos ||
        !(lb < rb && rb < at))
      throw Error("bad coords expression: " + text);
    std::vector<Rat> coords;
    std::string inner = st.substr(lb + 1, rb - lb - 1);
    std::stringstream ss(inner);
    std::string piece;
    while (std::getline(ss, piece, ',')) coords.push_back(rat_from_string(piece));
    IPoly mp = poly_from_string(st.substr(at + 1));
    if (degree(mp) == 1) {
      if (coords.size() != 1) throw Error("degree-1 field takes one coordinate");
      return FieldElement(coords[0]);
    }
    auto iso = isolate_largest_real_root(squarefree_part(mp));
    FieldPtr f = NumberField::create(mp, iso.first, iso.second);
    return FieldElement(f, std::move(coords));
  }

  if (st.find("sqrt") == std::string::npos) return FieldElement(rat_from_string(st));

  SqrtTerm term = parse_sqrt_expression(st);
  if (term.d == 0 || term.b == 0) return FieldElement(term.a);
  auto [s, fpart] = squarefree_decompose(term.d);
  if (fpart == 1) return FieldElement(term.a + term.b * Rat(s));  // perfect square
  FieldPtr f = NumberField::sqrt_field(fpart);
  std::vector<Rat> coords{term.a, term.b * Rat(s)};
  return FieldElement(f, std::move(coords));
}

}  // namespace cantor
