#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cassert>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

namespace elgf {

using Int = boost::multiprecision::cpp_int;
using IVec = std::vector<Int>;

// Dense row-major matrix over arbitrary-precision integers.  Sized for the
// relation/boundary matrices that show up here (hundreds of rows), not for
// numerical work.
class IMat {
public:
  IMat() = default;
  IMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static IMat identity(std::size_t n) {
    IMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  static IMat from_columns(std::size_t rows, const std::vector<IVec>& cols) {
    IMat m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      assert(cols[j].size() == rows);
      for (std::size_t i = 0; i < rows; ++i) m.at(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& at(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return a_[i * cols_ + j];
  }
  const Int& at(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return a_[i * cols_ + j];
  }

  IVec column(std::size_t j) const {
    IVec c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
    return c;
  }

  IVec row(std::size_t i) const {
    IVec r(cols_);
    for (std::size_t j = 0; j < cols_; ++j) r[j] = at(i, j);
    return r;
  }

  IMat transposed() const {
    IMat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  IMat operator*(const IMat& o) const {
    assert(cols_ == o.rows_);
    IMat r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Int& x = at(i, k);
        if (x == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j)
          if (o.at(k, j) != 0) r.at(i, j) += x * o.at(k, j);
      }
    return r;
  }

  IVec apply(const IVec& x) const {
    assert(x.size() == cols_);
    IVec y(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (at(i, j) != 0 && x[j] != 0) y[i] += at(i, j) * x[j];
    return y;
  }

  // Horizontal concatenation [this | o].
  IMat hstack(const IMat& o) const {
    assert(rows_ == o.rows_);
    IMat r(rows_, cols_ + o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
      for (std::size_t j = 0; j < o.cols_; ++j) r.at(i, cols_ + j) = o.at(i, j);
    }
    return r;
  }

  bool is_zero() const {
    for (const Int& x : a_)
      if (x != 0) return false;
    return true;
  }

  bool operator==(const IMat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

  std::string to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
      os << (i == 0 ? "[" : " ");
      for (std::size_t j = 0; j < cols_; ++j) os << at(i, j) << (j + 1 < cols_ ? " " : "");
      os << (i + 1 < rows_ ? ";\n" : "]");
    }
    return os.str();
  }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < cols_; ++k) std::swap(at(i, k), at(j, k));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < rows_; ++k) std::swap(at(k, i), at(k, j));
  }
  // row_i += q * row_j
  void row_axpy(std::size_t i, std::size_t j, const Int& q) {
    if (q == 0) return;
    for (std::size_t k = 0; k < cols_; ++k)
      if (at(j, k) != 0) at(i, k) += q * at(j, k);
  }
  // col_i += q * col_j
  void col_axpy(std::size_t i, std::size_t j, const Int& q) {
    if (q == 0) return;
    for (std::size_t k = 0; k < rows_; ++k)
      if (at(k, j) != 0) at(k, i) += q * at(k, j);
  }
  void negate_row(std::size_t i) {
    for (std::size_t k = 0; k < cols_; ++k) at(i, k) = -at(i, k);
  }
  void negate_col(std::size_t j) {
    for (std::size_t k = 0; k < rows_; ++k) at(k, j) = -at(k, j);
  }

private:
  std::size_t rows_ = 0, cols_ = 0;
  IVec a_;
};

inline Int iabs(const Int& x) { return x < 0 ? Int(-x) : x; }

}  // namespace elgf
