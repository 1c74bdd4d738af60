#include "cantor/lattice.hpp"

#include <algorithm>

namespace cantor {

namespace {

void negate_row(IntMat& m, int i) {
  for (int j = 0; j < m.cols(); ++j) m(i, j) = -m(i, j);
}

void negate_col(IntMat& m, int j) {
  for (int i = 0; i < m.rows(); ++i) m(i, j) = -m(i, j);
}

void swap_rows(IntMat& m, int i, int j) {
  if (i == j) return;
  for (int c = 0; c < m.cols(); ++c) std::swap(m(i, c), m(j, c));
}

void swap_cols(IntMat& m, int i, int j) {
  if (i == j) return;
  for (int r = 0; r < m.rows(); ++r) std::swap(m(r, i), m(r, j));
}

// row dst -= q * row src
void row_axpy(IntMat& m, int dst, int src, const Int& q) {
  if (q == 0) return;
  for (int c = 0; c < m.cols(); ++c) m(dst, c) -= q * m(src, c);
}

void col_axpy(IntMat& m, int dst, int src, const Int& q) {
  if (q == 0) return;
  for (int r = 0; r < m.rows(); ++r) m(r, dst) -= q * m(r, src);
}

Int fdiv(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// In-place row Hermite pass: work <- U work, trans <- U trans, U unimodular.
// Returns the pivot count.  Pivot rows end up sign-normalized with entries
// above each pivot reduced into [0, pivot).
int row_hermite(IntMat& work, IntMat& trans) {
  int n = work.rows(), d = work.cols();
  int prow = 0;
  for (int c = 0; c < d && prow < n; ++c) {
    // Euclid on the column below prow until a single nonzero remains.
    for (;;) {
      int best = -1;
      for (int r = prow; r < n; ++r) {
        if (work(r, c) == 0) continue;
        if (best < 0 || cmp(abs(work(r, c)), abs(work(best, c))) < 0) best = r;
      }
      if (best < 0) break;
      swap_rows(work, prow, best);
      swap_rows(trans, prow, best);
      bool below_clear = true;
      for (int r = prow + 1; r < n; ++r) {
        if (work(r, c) == 0) continue;
        Int q = fdiv(work(r, c), work(prow, c));
        row_axpy(work, r, prow, q);
        row_axpy(trans, r, prow, q);
        if (work(r, c) != 0) below_clear = false;
      }
      if (below_clear) break;
    }
    if (work(prow, c) == 0) continue;
    if (work(prow, c) < 0) {
      negate_row(work, prow);
      negate_row(trans, prow);
    }
    for (int r = 0; r < prow; ++r) {
      Int q = fdiv(work(r, c), work(prow, c));
      row_axpy(work, r, prow, q);
      row_axpy(trans, r, prow, q);
    }
    ++prow;
  }
  return prow;
}

// Column twin of row_hermite: work <- work V, trans <- trans V.
void col_hermite(IntMat& work, IntMat& trans) {
  int n = work.rows(), d = work.cols();
  int pcol = 0;
  for (int r = 0; r < n && pcol < d; ++r) {
    for (;;) {
      int best = -1;
      for (int c = pcol; c < d; ++c) {
        if (work(r, c) == 0) continue;
        if (best < 0 || cmp(abs(work(r, c)), abs(work(r, best))) < 0) best = c;
      }
      if (best < 0) break;
      swap_cols(work, pcol, best);
      swap_cols(trans, pcol, best);
      bool right_clear = true;
      for (int c = pcol + 1; c < d; ++c) {
        if (work(r, c) == 0) continue;
        Int q = fdiv(work(r, c), work(r, pcol));
        col_axpy(work, c, pcol, q);
        col_axpy(trans, c, pcol, q);
        if (work(r, c) != 0) right_clear = false;
      }
      if (right_clear) break;
    }
    if (work(r, pcol) == 0) continue;
    if (work(r, pcol) < 0) {
      negate_col(work, pcol);
      negate_col(trans, pcol);
    }
    for (int c = 0; c < pcol; ++c) {
      Int q = fdiv(work(r, c), work(r, pcol));
      col_axpy(work, c, pcol, q);
      col_axpy(trans, c, pcol, q);
    }
    ++pcol;
  }
}

bool is_diagonal(const IntMat& w) {
  for (int i = 0; i < w.rows(); ++i)
    for (int j = 0; j < w.cols(); ++j)
      if (i != j && w(i, j) != 0) return false;
  return true;
}

// rows (i, j) <- (u i + v j, s i + t j); u t - v s must be a unit.
void row_combine(IntMat& m, int i, int j, const Int& u, const Int& v, const Int& s,
                 const Int& t) {
  for (int c = 0; c < m.cols(); ++c) {
    Int a = m(i, c), b = m(j, c);
    m(i, c) = u * a + v * b;
    m(j, c) = s * a + t * b;
  }
}

}  // namespace

HnfResult hnf(const IntMat& a) {
  int n = a.rows(), d = a.cols();
  IntMat work = a;
  IntMat trans = IntMat::identity(n);
  int prow = row_hermite(work, trans);
  HnfResult out;
  out.basis = IntMat(prow, d);
  out.transform = IntMat(prow, n);
  for (int i = 0; i < prow; ++i) {
    for (int j = 0; j < d; ++j) out.basis(i, j) = work(i, j);
    for (int j = 0; j < n; ++j) out.transform(i, j) = trans(i, j);
  }
  return out;
}

SnfResult snf(const IntMat& a) {
  int n = a.rows(), m = a.cols();
  IntMat work = a;
  IntMat left = IntMat::identity(n);
  IntMat right = IntMat::identity(m);
  // Alternate row and column Hermite passes until diagonal.  Eliminating one
  // pivot at a time instead lets the trailing block grow exponentially (each
  // clearing pass adds quotient-sized multiples of an unreduced pivot tail);
  // full Hermite passes re-reduce everything against every pivot, so entries
  // stay within determinant-sized bounds.  The alternation terminates: each
  // pass weakly divides the leading entry, and once it stabilizes its row and
  // column clear exactly and the block decouples.
  row_hermite(work, left);
  while (!is_diagonal(work)) {
    col_hermite(work, right);
    if (is_diagonal(work)) break;
    row_hermite(work, left);
  }
  int tmax = std::min(n, m);
  // Pack nonzero diagonal entries first and make them positive.
  int rank = 0;
  for (int k = 0; k < tmax; ++k) {
    if (work(k, k) == 0) continue;
    if (k != rank) {
      swap_rows(work, rank, k);
      swap_rows(left, rank, k);
      swap_cols(work, rank, k);
      swap_cols(right, rank, k);
    }
    ++rank;
  }
  for (int i = 0; i < rank; ++i)
    if (work(i, i) < 0) {
      negate_row(work, i);
      negate_row(left, i);
    }
  // Divisibility chain: replace offending pairs (a, b) by (gcd, lcm) with an
  // explicit unimodular 2x2.  Fold column j into column i, take the Bezout
  // row combination, then clear the one off-diagonal entry it leaves.
  for (int i = 0; i < rank; ++i)
    for (int j = i + 1; j < rank; ++j) {
      if (work(j, j) % work(i, i) == 0) continue;
      const Int a1 = work(i, i), b1 = work(j, j);
      Int g, u, v;
      mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a1.get_mpz_t(),
                 b1.get_mpz_t());
      Int ag = a1 / g, bg = b1 / g;
      col_axpy(work, i, j, Int(-1));
      col_axpy(right, i, j, Int(-1));
      row_combine(work, i, j, u, v, -bg, ag);
      row_combine(left, i, j, u, v, -bg, ag);
      col_axpy(work, j, i, v * bg);
      col_axpy(right, j, i, v * bg);
    }
  SnfResult out;
  out.factors.resize(size_t(tmax));
  for (int i = 0; i < tmax; ++i) out.factors[size_t(i)] = work(i, i);
  out.left = std::move(left);
  out.right = std::move(right);
  out.rank = rank;
  return out;
}

QLattice QLattice::from_generators(const RatMat& gens) {
  QLattice out;
  out.ambient_ = gens.cols();
  Int den = 1;
  for (int i = 0; i < gens.rows(); ++i)
    for (int j = 0; j < gens.cols(); ++j) {
      Int d = gens(i, j).get_den();
      Int g = gcd(den, d);
      den = den / g * d;
    }
  out.denom_ = den;
  IntMat scaled(gens.rows(), gens.cols());
  for (int i = 0; i < gens.rows(); ++i)
    for (int j = 0; j < gens.cols(); ++j) {
      Rat v = gens(i, j) * Rat(den);
      if (v.get_den() != 1) throw Error("denominator clearing failed");
      scaled(i, j) = v.get_num();
    }
  out.basis_ = hnf(scaled).basis;
  return out;
}

RatMat QLattice::basis() const {
  RatMat b(basis_.rows(), basis_.cols());
  for (int i = 0; i < basis_.rows(); ++i)
    for (int j = 0; j < basis_.cols(); ++j) b(i, j) = make_rat(basis_(i, j), denom_);
  return b;
}

std::optional<std::vector<Int>> QLattice::member(const std::vector<Rat>& x) const {
  if (int(x.size()) != ambient_) throw Error("ambient dimension mismatch");
  std::vector<Int> y(static_cast<size_t>(ambient_));
  for (int j = 0; j < ambient_; ++j) {
    Rat v = x[size_t(j)] * Rat(denom_);
    if (v.get_den() != 1) return std::nullopt;
    y[size_t(j)] = v.get_num();
  }
  int r = basis_.rows();
  std::vector<Int> coeff(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) {
    int p = 0;
    while (p < ambient_ && basis_(i, p) == 0) ++p;
    if (p == ambient_) throw Error("zero basis row");
    Int rem = y[size_t(p)] % basis_(i, p);
    if (rem != 0) return std::nullopt;
    Int q = y[size_t(p)] / basis_(i, p);
    for (int j = 0; j < ambient_; ++j) y[size_t(j)] -= q * basis_(i, j);
    coeff[size_t(i)] = q;
  }
  for (int j = 0; j < ambient_; ++j)
    if (y[size_t(j)] != 0) return std::nullopt;
  return coeff;
}

bool QLattice::contains(const QLattice& other) const {
  if (ambient_ != other.ambient_) throw Error("ambient dimension mismatch");
  RatMat ob = other.basis();
  for (int i = 0; i < ob.rows(); ++i)
    if (!member(ob.row(i))) return false;
  return true;
}

QuotientInvariants quotient_invariants(const QLattice& e, const QLattice& i) {
  if (!i.contains(e)) throw Error("quotient needs the first lattice inside the second");
  RatMat eb = e.basis();
  IntMat x(eb.rows(), i.rank());
  for (int r = 0; r < eb.rows(); ++r) {
    auto c = i.member(eb.row(r));
    for (int j = 0; j < i.rank(); ++j) x(r, j) = (*c)[size_t(j)];
  }
  SnfResult s = snf(x);
  QuotientInvariants out;
  for (int k = 0; k < s.rank; ++k) out.factors.push_back(s.factors[size_t(k)]);
  out.free_rank = i.rank() - s.rank;
  return out;
}

}  // namespace cantor
