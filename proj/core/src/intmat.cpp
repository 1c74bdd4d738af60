#include "cantor/intmat.hpp"

#include "cantor/polynomial.hpp"

namespace cantor {

bool is_nonnegative(const IntMat& m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (m(i, j) < 0) return false;
  return true;
}

bool is_positive(const IntMat& m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (m(i, j) <= 0) return false;
  return true;
}

Int det(const IntMat& m) {
  if (m.rows() != m.cols()) throw Error("determinant of a non-square matrix");
  int n = m.rows();
  if (n == 0) return 1;
  IntMat a = m;
  Int denom = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a(k, k) == 0) {
      int piv = -1;
      for (int i = k + 1; i < n; ++i)
        if (a(i, k) != 0) {
          piv = i;
          break;
        }
      if (piv < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        Int num = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        a(i, j) = num / denom;  // Bareiss: division is exact
      }
    denom = a(k, k);
  }
  return sign > 0 ? a(n - 1, n - 1) : Int(-a(n - 1, n - 1));
}

IntMat pow(const IntMat& m, unsigned k) {
  if (m.rows() != m.cols()) throw Error("power of a non-square matrix");
  IntMat r = IntMat::identity(m.rows());
  IntMat base = m;
  while (k > 0) {
    if (k & 1u) r = r * base;
    base = base * base;
    k >>= 1u;
  }
  return r;
}

bool is_primitive(const IntMat& m) {
  if (m.rows() != m.cols()) throw Error("primitivity of a non-square matrix");
  if (!is_nonnegative(m)) throw Error("primitivity requires a nonnegative matrix");
  int n = m.rows();
  unsigned wielandt = unsigned((n - 1) * (n - 1) + 1);
  IntMat p = m;
  for (unsigned k = 1; k <= wielandt; ++k) {
    if (is_positive(p)) return true;
    p = p * m;
  }
  return false;
}

IPoly char_poly(const IntMat& m) {
  if (m.rows() != m.cols()) throw Error("characteristic polynomial of a non-square matrix");
  int n = m.rows();
  // Faddeev-LeVerrier over Q; the result is integral.
  RatMat a(n, n), acc = RatMat::identity(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Rat(m(i, j));
  std::vector<Rat> c(size_t(n) + 1);
  c[size_t(n)] = 1;
  for (int k = 1; k <= n; ++k) {
    acc = a * acc;
    Rat tr = 0;
    for (int i = 0; i < n; ++i) tr += acc(i, i);
    Rat ck = -tr / k;
    c[size_t(n - k)] = ck;
    for (int i = 0; i < n; ++i) acc(i, i) += ck;
  }
  IPoly p(size_t(n) + 1);
  for (int i = 0; i <= n; ++i) {
    if (c[size_t(i)].get_den() != 1) throw Error("characteristic polynomial not integral");
    p[size_t(i)] = c[size_t(i)].get_num();
  }
  return p;
}

}  // namespace cantor
