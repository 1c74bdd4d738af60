#include <random>

#include "cantor/lattice.hpp"
#include "doctest.h"

using namespace cantor;

namespace {

IntMat mat2(Int a, Int b, Int c, Int d) { return IntMat(2, 2, {a, b, c, d}); }

RatMat rmat(int rows, int cols, std::vector<Rat> v) { return RatMat(rows, cols, std::move(v)); }

IntMat random_mat(std::mt19937& rng, int rows, int cols, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = d(rng);
  return m;
}

}  // namespace

TEST_CASE("hermite form of a known matrix") {
  HnfResult h = hnf(mat2(2, 4, 6, 8));
  CHECK((h.basis == mat2(2, 0, 0, 4)));
  CHECK((h.transform * mat2(2, 4, 6, 8) == h.basis));
}

TEST_CASE("hermite form properties") {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 60; ++trial) {
    IntMat a = random_mat(rng, 3, 3, -9, 9);
    HnfResult h = hnf(a);
    // Reconstruction and idempotence.
    CHECK((h.transform * a == h.basis));
    CHECK((hnf(h.basis).basis == h.basis));
    // Echelon shape with positive pivots and reduced entries above.
    int prev = -1;
    for (int i = 0; i < h.basis.rows(); ++i) {
      int p = 0;
      while (p < h.basis.cols() && h.basis(i, p) == 0) ++p;
      CHECK(p < h.basis.cols());
      CHECK(p > prev);
      prev = p;
      CHECK((h.basis(i, p) > 0));
      for (int r = 0; r < i; ++r) {
        CHECK((h.basis(r, p) >= 0));
        CHECK((h.basis(r, p) < h.basis(i, p)));
      }
    }
    // Same row span either way: equal canonical lattices.
    RatMat ga(a.rows(), a.cols()), gb(h.basis.rows(), h.basis.cols());
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j) ga(i, j) = Rat(a(i, j));
    for (int i = 0; i < h.basis.rows(); ++i)
      for (int j = 0; j < h.basis.cols(); ++j) gb(i, j) = Rat(h.basis(i, j));
    CHECK((QLattice::from_generators(ga) == QLattice::from_generators(gb)));
  }
}

TEST_CASE("smith form of a known matrix") {
  SnfResult s = snf(mat2(2, 4, 6, 8));
  CHECK((s.factors == std::vector<Int>{2, 4}));
  CHECK(s.rank == 2);
  CHECK((abs(det(s.left)) == 1));
  CHECK((abs(det(s.right)) == 1));
  IntMat diag(2, 2);
  diag(0, 0) = 2;
  diag(1, 1) = 4;
  CHECK((s.left * mat2(2, 4, 6, 8) * s.right == diag));
}

TEST_CASE("smith form properties") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 + int(rng() % 2), m = 2 + int(rng() % 2);
    IntMat a = random_mat(rng, n, m, -12, 12);
    SnfResult s = snf(a);
    CHECK((abs(det(s.left)) == 1));
    CHECK((abs(det(s.right)) == 1));
    IntMat diag(n, m);
    for (int k = 0; k < int(s.factors.size()); ++k) diag(k, k) = s.factors[size_t(k)];
    CHECK((s.left * a * s.right == diag));
    for (size_t k = 0; k + 1 < s.factors.size(); ++k) {
      CHECK((s.factors[k] >= 0));
      if (s.factors[k + 1] != 0) {
        CHECK((s.factors[k] != 0));
        CHECK((s.factors[k + 1] % s.factors[k] == 0));
      }
    }
  }
}

TEST_CASE("rational lattice canonicalization and membership") {
  QLattice l = QLattice::from_generators(
      rmat(2, 2, {Rat(1, 2), Rat(0), Rat(0), Rat(1, 3)}));
  CHECK(l.ambient() == 2);
  CHECK(l.rank() == 2);
  CHECK((l.denominator() == 6));
  CHECK((l.int_basis() == mat2(3, 0, 0, 2)));

  auto c = l.member({Rat(1, 2), Rat(1, 3)});
  REQUIRE(c.has_value());
  CHECK((*c == std::vector<Int>{1, 1}));
  CHECK(l.member({Rat(5, 2), Rat(-2, 3)}).has_value());
  CHECK(!l.member({Rat(1, 3), Rat(0)}).has_value());
  CHECK(!l.member({Rat(1, 4), Rat(0)}).has_value());

  QLattice sub = QLattice::from_generators(rmat(1, 2, {Rat(1), Rat(2, 3)}));
  CHECK(l.contains(sub));
  CHECK(!sub.contains(l));
}

TEST_CASE("lattice equality ignores the generating set") {
  RatMat g1 = rmat(2, 2, {Rat(1, 2), Rat(1, 2), Rat(0), Rat(1)});
  // Unimodular recombination of the same rows.
  RatMat g2 = rmat(2, 2, {Rat(1, 2), Rat(3, 2), Rat(1, 2), Rat(5, 2)});
  CHECK((QLattice::from_generators(g1) == QLattice::from_generators(g2)));

  // Redundant generators collapse.
  RatMat g3 = rmat(3, 2, {Rat(1, 2), Rat(1, 2), Rat(0), Rat(1), Rat(1, 2), Rat(3, 2)});
  CHECK((QLattice::from_generators(g1) == QLattice::from_generators(g3)));
}

TEST_CASE("quotient invariants of known pairs") {
  QLattice z2 = QLattice::from_generators(rmat(2, 2, {Rat(1), Rat(0), Rat(0), Rat(1)}));
  QLattice e = QLattice::from_generators(rmat(2, 2, {Rat(1), Rat(0), Rat(0), Rat(2)}));
  QuotientInvariants q = quotient_invariants(e, z2);
  CHECK((q.factors == std::vector<Int>{1, 2}));
  CHECK(q.free_rank == 0);

  // (1/6)Z over Z: cyclic of order six.
  QLattice i6 = QLattice::from_generators(rmat(1, 1, {Rat(1, 6)}));
  QLattice z1 = QLattice::from_generators(rmat(1, 1, {Rat(1)}));
  QuotientInvariants q6 = quotient_invariants(z1, i6);
  CHECK((q6.factors == std::vector<Int>{6}));
  CHECK(q6.free_rank == 0);

  // Rank drop leaves a free part.
  QLattice line = QLattice::from_generators(rmat(1, 2, {Rat(1), Rat(0)}));
  QuotientInvariants qf = quotient_invariants(line, z2);
  CHECK((qf.factors == std::vector<Int>{1}));
  CHECK(qf.free_rank == 1);

  CHECK_THROWS_AS(quotient_invariants(i6, z1), Error);
}

TEST_CASE("quotient index equals the determinant") {
  std::mt19937 rng(37);
  QLattice z2 = QLattice::from_generators(rmat(2, 2, {Rat(1), Rat(0), Rat(0), Rat(1)}));
  int done = 0;
  while (done < 40) {
    IntMat a = random_mat(rng, 2, 2, -8, 8);
    Int d = det(a);
    if (d == 0) continue;
    ++done;
    RatMat g(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) g(i, j) = Rat(a(i, j));
    QuotientInvariants q = quotient_invariants(QLattice::from_generators(g), z2);
    CHECK(q.free_rank == 0);
    Int prod = 1;
    for (const Int& f : q.factors) prod *= f;
    CHECK((prod == abs(d)));
  }
}
