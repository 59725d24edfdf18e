#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "weavesafe/gf2m.hpp"

namespace weavesafe::linalg {

using gf::Element;
using gf::FieldPtr;
using Vector = std::vector<Element>;

// Dense row-major matrix over GF(2^m). Value semantic; the field is shared.
class Matrix {
 public:
  // Empty 0 x 0 matrix without a field.
  Matrix() = default;
  Matrix(FieldPtr field, std::size_t rows, std::size_t cols);
  Matrix(FieldPtr field, std::size_t rows, std::size_t cols, std::vector<Element> data);

  static Matrix identity(FieldPtr field, std::size_t n);
  // Builds from integer literals, validating each entry against the field.
  static Matrix from_values(FieldPtr field,
                            const std::vector<std::vector<std::uint32_t>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const FieldPtr& field_ptr() const { return field_; }
  const gf::Field& field() const { return *field_; }

  Element& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Element operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Element> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Element> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const Element> data() const { return data_; }

  void append_row(std::span<const Element> values);

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  FieldPtr field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Element> data_;
};

// Cauchy matrix C(i,j) = 1 / (row_points[i] + col_points[j]). The point lists
// must be internally distinct and disjoint from each other.
Matrix cauchy(FieldPtr field, std::span<const Element> row_points,
              std::span<const Element> col_points);

// Row rank by Gaussian elimination; pivots are the first nonzero entry in
// column order.
std::size_t rank(const Matrix& a);

Matrix transpose(const Matrix& a);
Matrix mat_mul(const Matrix& a, const Matrix& b);
Vector mat_vec(const Matrix& a, std::span<const Element> x);
Matrix vstack(const Matrix& top, const Matrix& bottom);
Matrix submatrix(const Matrix& a, std::span<const std::size_t> row_idx,
                 std::span<const std::size_t> col_idx);
Matrix select_rows(const Matrix& a, std::span<const std::size_t> row_idx);

// Throws Error(singular_matrix) for a singular or non-square input.
Matrix invert(const Matrix& a);
// One solution of A x = b (free variables set to zero). Throws
// Error(inconsistent_system) when none exists.
Vector solve(const Matrix& a, std::span<const Element> b);
// Rows form a basis of { x : A x = 0 }.
Matrix null_space(const Matrix& a);

struct MinorCounterexample {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
};

// Exhaustive check that every square submatrix of order <= max_order is
// nonsingular. Returns the first singular minor (orders ascending, index sets
// lexicographic) or nullopt. Throws Error(cap_exceeded) above `minor_cap`
// minors in total.
std::optional<MinorCounterexample> all_square_submatrices_nonsingular(
    const Matrix& a, std::size_t max_order, std::size_t minor_cap = 10'000'000);

}  // namespace weavesafe::linalg
