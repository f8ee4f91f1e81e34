#pragma once

// Dense vectors and matrices over exact integers/rationals (GMP) plus the
// extended-precision real used where double precision runs out.

#include <cstddef>
#include <string>
#include <vector>

#include <boost/multiprecision/mpfr.hpp>
#include <gmpxx.h>

#include "k3h/error.hpp"

namespace k3h {

using Int = mpz_class;
using Rat = mpq_class;
// ~330 bits; enough to code boundary rays for a few hundred letters.
using HiReal = boost::multiprecision::mpfr_float_100;

using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;
using HiVec = std::vector<HiReal>;

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> row_major)
      : rows_(rows), cols_(cols), data_(std::move(row_major)) {
    if (data_.size() != rows * cols) fail(ErrorCode::kDimensionMismatch, "matrix data size");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const std::vector<T>& data() const { return data_; }

  std::vector<T> column(std::size_t c) const {
    std::vector<T> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) fail(ErrorCode::kDimensionMismatch, "matrix product");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend std::vector<T> operator*(const Matrix& a, const std::vector<T>& v) {
    if (a.cols_ != v.size()) fail(ErrorCode::kDimensionMismatch, "matrix-vector product");
    std::vector<T> out(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) out[i] += a(i, k) * v[k];
    return out;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail(ErrorCode::kDimensionMismatch, "matrix sum");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }

  friend Matrix operator-(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail(ErrorCode::kDimensionMismatch, "matrix difference");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

RatVec to_rat(const IntVec& v);
RatMatrix to_rat(const IntMatrix& m);
// Throws kInvalidArgument when some entry is not an integer.
IntMatrix to_int(const RatMatrix& m);

std::vector<double> to_double(const RatVec& v);
std::vector<double> to_double(const IntVec& v);
HiVec to_hi(const IntVec& v);

IntMatrix matrix_power(const IntMatrix& m, unsigned k);

// Smallest positive integer multiple of v with coprime entries (sign kept).
IntVec primitive(const RatVec& v);

// Basis of the right kernel of m over Q (reduced echelon form, deterministic).
std::vector<RatVec> rational_kernel(const RatMatrix& m);

// log of max(|a|,|b|) without overflow for arbitrarily large integers.
double log_abs(const Int& a);

std::string to_string(const Rat& q);
// 17 significant digits ("%.17g"); "nan", "inf", "-inf" for non-finite values.
std::string format_real(double x);
Rat parse_rational(const std::string& text);

}  // namespace k3h
