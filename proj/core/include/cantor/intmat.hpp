#pragma once

// Dense matrices with value semantics.  Entry types in use: Int, Rat,
// FieldElement.

#include <cstddef>
#include <vector>

#include "cantor/polynomial.hpp"
#include "cantor/rational.hpp"

namespace cantor {

template <typename T>
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {}
  Mat(int rows, int cols, std::vector<T> data) : rows_(rows), cols_(cols), a_(std::move(data)) {
    if (a_.size() != size_t(rows) * cols) throw Error("matrix data size mismatch");
  }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  T& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
  const T& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

  friend bool operator==(const Mat& x, const Mat& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
  }
  friend bool operator!=(const Mat& x, const Mat& y) { return !(x == y); }

  Mat transpose() const {
    Mat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Mat operator*(const Mat& x, const Mat& y) {
    if (x.cols_ != y.rows_) throw Error("matrix product shape mismatch");
    Mat p(x.rows_, y.cols_);
    for (int i = 0; i < x.rows_; ++i)
      for (int k = 0; k < x.cols_; ++k) {
        const T& xik = x(i, k);
        if (xik == T(0)) continue;
        for (int j = 0; j < y.cols_; ++j) p(i, j) += xik * y(k, j);
      }
    return p;
  }

  std::vector<T> mul_vec(const std::vector<T>& v) const {
    if (int(v.size()) != cols_) throw Error("matrix-vector shape mismatch");
    std::vector<T> r(rows_, T(0));
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  std::vector<T> row(int i) const {
    std::vector<T> r(cols_);
    for (int j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
    return r;
  }

 private:
  int rows_, cols_;
  std::vector<T> a_;
};

using IntMat = Mat<Int>;
using RatMat = Mat<Rat>;

bool is_nonnegative(const IntMat& m);
bool is_positive(const IntMat& m);
// Fraction-free (Bareiss) determinant, square input.
Int det(const IntMat& m);
// B^k > 0 for some k <= (n-1)^2 + 1 (Wielandt); requires nonnegative square input.
bool is_primitive(const IntMat& m);
IntMat pow(const IntMat& m, unsigned k);
// Characteristic polynomial, monic, low-to-high (Faddeev-LeVerrier).
IPoly char_poly(const IntMat& m);

}  // namespace cantor
