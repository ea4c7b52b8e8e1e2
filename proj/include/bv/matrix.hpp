#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "bv/rational.hpp"

namespace bv {

// Dense matrix over a scalar (mpz_class / mpq_class / Interval). Dimensions here are
// vertex counts per level, so these stay tiny; entries are what grow.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T init = T())
      : rows_(rows), cols_(cols), data_(rows * cols, init) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n, T(0));
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("Matrix: dimension mismatch");
    Matrix out(rows_, o.cols_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k)
        for (std::size_t j = 0; j < o.cols_; ++j)
          out(i, j) = out(i, j) + (*this)(i, k) * o(k, j);
    return out;
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  // row vector * matrix
  friend std::vector<T> operator*(const std::vector<T>& v, const Matrix& m) {
    if (v.size() != m.rows_) throw std::invalid_argument("Matrix: row vector size mismatch");
    std::vector<T> out(m.cols_, T(0));
    for (std::size_t i = 0; i < m.rows_; ++i)
      for (std::size_t j = 0; j < m.cols_; ++j) out[j] = out[j] + v[i] * m(i, j);
    return out;
  }

  // matrix * column vector
  std::vector<T> mul_col(const std::vector<T>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("Matrix: column vector size mismatch");
    std::vector<T> out(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i] = out[i] + (*this)(i, j) * v[j];
    return out;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;

template <class T>
T inner(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner: size mismatch");
  T s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s = s + a[i] * b[i];
  return s;
}

}  // namespace bv
