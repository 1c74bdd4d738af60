#include "cantor/dimgroup.hpp"

#include <algorithm>
#include <map>

namespace cantor {

namespace {

std::vector<Rat> coords_in(const FieldElement& x, const FieldPtr& f) {
  auto e = try_embed(x, f);
  if (!e) throw Error("element does not lie in the group's field");
  return e->coords();
}

// Basis rows (RREF, pivot-normalized) of the right kernel of a rational
// matrix; vectors have the matrix's column count.
RatMat rational_kernel(const RatMat& a) {
  int n = a.rows(), m = a.cols();
  RatMat w = a;
  std::vector<int> pivot_cols;
  int r = 0;
  for (int c = 0; c < m && r < n; ++c) {
    int pr = -1;
    for (int i = r; i < n; ++i)
      if (w(i, c) != 0) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    for (int j = 0; j < m; ++j) std::swap(w(r, j), w(pr, j));
    Rat inv = Rat(1) / w(r, c);
    for (int j = 0; j < m; ++j) w(r, j) *= inv;
    for (int i = 0; i < n; ++i) {
      if (i == r || w(i, c) == 0) continue;
      Rat f = w(i, c);
      for (int j = 0; j < m; ++j) w(i, j) -= f * w(r, j);
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(size_t(m), false);
  for (int c : pivot_cols) is_pivot[size_t(c)] = true;
  int free_count = m - int(pivot_cols.size());
  RatMat kern(free_count, m);
  int out_row = 0;
  for (int c = 0; c < m; ++c) {
    if (is_pivot[size_t(c)]) continue;
    kern(out_row, c) = 1;
    for (int i = 0; i < int(pivot_cols.size()); ++i)
      kern(out_row, pivot_cols[size_t(i)]) = -w(i, c);
    ++out_row;
  }
  return kern;
}

std::vector<Int> integerize(const std::vector<Rat>& v) {
  Int den = 1;
  for (const auto& x : v) {
    Int d = x.get_den();
    Int g = gcd(den, d);
    den = den / g * d;
  }
  std::vector<Int> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    Rat s = v[i] * Rat(den);
    out[i] = s.get_num();
  }
  return out;
}

}  // namespace

SubgroupOfR SubgroupOfR::from_elements(const FieldPtr& field,
                                       const std::vector<FieldElement>& gens) {
  if (gens.empty()) throw Error("subgroup needs at least one generator");
  SubgroupOfR g;
  g.field_ = field;
  g.gens_ = gens;
  int d = field->degree();
  RatMat rows(int(gens.size()), d);
  for (int i = 0; i < int(gens.size()); ++i) {
    auto c = coords_in(gens[size_t(i)], field);
    for (int j = 0; j < d; ++j) rows(i, j) = c[size_t(j)];
  }
  g.lattice_ = QLattice::from_generators(rows);

  std::vector<Rat> one(size_t(d), Rat(0));
  one[0] = 1;
  if (!g.lattice_.member(one)) throw Error("subgroup must contain 1");

  IntMat scaled(rows.rows(), rows.cols());
  for (int i = 0; i < rows.rows(); ++i)
    for (int j = 0; j < rows.cols(); ++j) {
      Rat v = rows(i, j) * Rat(g.lattice_.denominator());
      if (v.get_den() != 1) throw Error("denominator clearing failed");
      scaled(i, j) = v.get_num();
    }
  g.gen_transform_ = hnf(scaled).transform;
  return g;
}

bool SubgroupOfR::contains(const FieldElement& x) const {
  auto e = try_embed(x, field_);
  if (!e) return false;
  return bool(lattice_.member(e->coords()));
}

std::optional<std::vector<Int>> SubgroupOfR::combination(const FieldElement& x) const {
  auto e = try_embed(x, field_);
  if (!e) return std::nullopt;
  auto c = lattice_.member(e->coords());
  if (!c) return std::nullopt;
  // x = c . basis and basis = gen_transform . gens, so x = (c . T) . gens.
  std::vector<Int> combo(size_t(gen_transform_.cols()), Int(0));
  for (int j = 0; j < gen_transform_.cols(); ++j)
    for (int i = 0; i < gen_transform_.rows(); ++i)
      combo[size_t(j)] += (*c)[size_t(i)] * gen_transform_(i, j);
  return combo;
}

RationalMembership rational_member(const Tower& t, const Int& p, const Int& q, int depth) {
  if (q < 1) throw Error("denominator must be >= 1");
  Int pp = p, qq = q;
  Int g = gcd(pp, qq);
  if (g > 1) {
    pp /= g;
    qq /= g;
  }
  RationalMembership out;
  if (qq == 1) {
    out.status = RationalMembership::Status::MemberAtLevel;
    out.level = 1;
    return out;
  }
  if (depth < 1) depth = 1;

  auto reduce = [&qq](std::vector<Int> v) {
    for (auto& x : v) {
      x %= qq;
      if (x < 0) x += qq;
    }
    return v;
  };
  auto all_zero = [](const std::vector<Int>& v) {
    for (const auto& x : v)
      if (x != 0) return false;
    return true;
  };

  bool has_cont = t.continuation() != Tower::Continuation::None;
  std::map<std::pair<int, std::vector<Int>>, int> seen;
  int n_built = t.levels();
  std::vector<Int> cur;
  int state = 0;
  for (int k = 1; k <= depth; ++k) {
    if (k <= n_built) {
      cur = reduce(t.heights(k));
      if (has_cont) state = t.continuation_state(k);
    } else {
      if (!has_cont) {
        out.status = RationalMembership::Status::UnknownUpTo;
        out.level = k - 1;
        return out;
      }
      auto [a, ns] = t.continuation_next(state);
      cur = reduce(a.mul_vec(cur));
      state = ns;
    }
    if (all_zero(cur)) {
      out.status = RationalMembership::Status::MemberAtLevel;
      out.level = k;
      return out;
    }
    if (has_cont) {
      auto key = std::make_pair(state, cur);
      auto it = seen.find(key);
      if (it != seen.end()) {
        out.status = RationalMembership::Status::CertifiedNonMember;
        out.level = k;
        out.preperiod = it->second;
        out.period = k - it->second;
        return out;
      }
      seen.emplace(std::move(key), k);
    }
  }
  out.status = RationalMembership::Status::UnknownUpTo;
  out.level = depth;
  return out;
}

SubgroupOfR image_group(const Tower& t, const ExactMeasure& mu, int n) {
  MeasureVector v = mu.at_level(n);
  std::vector<FieldElement> gens;
  gens.push_back(FieldElement(Rat(1)));
  for (const auto& x : v.values) gens.push_back(x);
  (void)t;
  return SubgroupOfR::from_elements(mu.field(), gens);
}

InfinitesimalReport infinitesimal_report(const Tower& t, const ExactMeasure& mu) {
  auto b = t.stationary_matrix();
  if (!b) throw Error("infinitesimal test needs a stationary tower");
  int c = b->rows();
  MeasureVector m1 = mu.at_level(1);
  int d = mu.field()->degree();

  // Rational kernel of the trace at level 1: coordinates of mu_1(k) give
  // one linear condition per power-basis coordinate.
  RatMat w(d, c);
  for (int k = 0; k < c; ++k) {
    auto e = try_embed(m1.values[size_t(k)], mu.field());
    if (!e) throw Error("measure value outside its own field");
    for (int i = 0; i < d; ++i) w(i, k) = e->coords()[size_t(i)];
  }
  InfinitesimalReport out;
  out.kernel_basis = rational_kernel(w);

  IntMat bc = pow(*b, unsigned(c));
  for (int r = 0; r < out.kernel_basis.rows(); ++r) {
    std::vector<Int> v = integerize(out.kernel_basis.row(r));
    // Witness sign convention: leading nonzero entry positive.
    for (const auto& x : v) {
      if (x == 0) continue;
      if (x < 0)
        for (auto& y : v) y = -y;
      break;
    }
    std::vector<Int> img = bc.mul_vec(v);
    bool zero = true;
    for (const auto& x : img)
      if (x != 0) zero = false;
    if (!zero) {
      out.verdict = InfinitesimalReport::Verdict::NonTrivial;
      out.witness = v;
      return out;
    }
  }
  out.verdict = InfinitesimalReport::Verdict::Trivial;
  return out;
}

QuotientInvariants torsion_quotient(const SubgroupOfR& i, const SubgroupOfR& e) {
  if (!same_field(i.field(), e.field())) {
    bool both_rational_ambient = i.field()->is_rational() && e.field()->is_rational();
    if (!both_rational_ambient)
      throw Error("quotient needs both subgroups over one field");
  }
  return quotient_invariants(e.lattice(), i.lattice());
}

}  // namespace cantor
