#include <algorithm>
#include <string>

#include "weavesafe/combinations.hpp"
#include "weavesafe/error.hpp"
#include "weavesafe/matrix.hpp"

namespace weavesafe::linalg {
namespace {

constexpr std::string_view kModule = "linalg";

void require_same_field(const Matrix& a, const Matrix& b) {
  if (a.field_ptr() != b.field_ptr() &&
      a.field().degree() != b.field().degree()) {
    throw Error(Errc::invalid_argument, kModule, "operands from different fields");
  }
}

std::string dims(const Matrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

// In-place row reduction to reduced row echelon form. Returns pivot columns.
std::vector<std::size_t> reduce(Matrix& a) {
  const gf::Field& f = a.field();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a(p, c).is_zero()) ++p;
    if (p == a.rows()) continue;
    if (p != r) {
      auto rp = a.row(p);
      auto rr = a.row(r);
      std::swap_ranges(rp.begin(), rp.end(), rr.begin());
    }
    const Element scale = f.inv(a(r, c));
    for (std::size_t j = c; j < a.cols(); ++j) a(r, j) = f.mul(a(r, j), scale);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r) continue;
      const Element factor = a(i, c);
      if (factor.is_zero()) continue;
      for (std::size_t j = c; j < a.cols(); ++j) {
        a(i, j) += f.mul(factor, a(r, j));
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

Matrix::Matrix(FieldPtr field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols) {}

Matrix::Matrix(FieldPtr field, std::size_t rows, std::size_t cols,
               std::vector<Element> data)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(Errc::dimension_mismatch, kModule, "data length does not match shape");
  }
  for (Element e : data_) {
    if (!field_->contains(e)) {
      throw Error(Errc::invalid_argument, kModule, "entry outside field");
    }
  }
}

Matrix Matrix::identity(FieldPtr field, std::size_t n) {
  Matrix m(std::move(field), n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Element(1);
  return m;
}

Matrix Matrix::from_values(FieldPtr field,
                           const std::vector<std::vector<std::uint32_t>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  std::vector<Element> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) {
      throw Error(Errc::dimension_mismatch, kModule, "ragged row list");
    }
    for (std::uint32_t v : row) data.push_back(field->element(v));
  }
  return Matrix(std::move(field), r, c, std::move(data));
}

void Matrix::append_row(std::span<const Element> values) {
  if (values.size() != cols_) {
    throw Error(Errc::dimension_mismatch, kModule, "appended row has wrong length");
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

Matrix cauchy(FieldPtr field, std::span<const Element> row_points,
              std::span<const Element> col_points) {
  std::vector<Element> all(row_points.begin(), row_points.end());
  all.insert(all.end(), col_points.begin(), col_points.end());
  for (Element e : all) {
    if (!field->contains(e)) {
      throw Error(Errc::invalid_argument, kModule, "Cauchy point outside field");
    }
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw Error(Errc::invalid_argument, kModule,
                "Cauchy points must be distinct and row/column sets disjoint");
  }
  Matrix m(field, row_points.size(), col_points.size());
  for (std::size_t i = 0; i < row_points.size(); ++i) {
    for (std::size_t j = 0; j < col_points.size(); ++j) {
      m(i, j) = field->inv(row_points[i] + col_points[j]);
    }
  }
  return m;
}

std::size_t rank(const Matrix& a) {
  Matrix work = a;
  return reduce(work).size();
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.field_ptr(), a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  }
  return t;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
  require_same_field(a, b);
  if (a.cols() != b.rows()) {
    throw Error(Errc::dimension_mismatch, kModule,
                "cannot multiply " + dims(a) + " by " + dims(b));
  }
  const gf::Field& f = a.field();
  Matrix out(a.field_ptr(), a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const Element x = a(i, l);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += f.mul(x, b(l, j));
    }
  }
  return out;
}

Vector mat_vec(const Matrix& a, std::span<const Element> x) {
  if (a.cols() != x.size()) {
    throw Error(Errc::dimension_mismatch, kModule,
                "vector of length " + std::to_string(x.size()) + " against " + dims(a));
  }
  const gf::Field& f = a.field();
  Vector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Element acc;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += f.mul(a(i, j), x[j]);
    out[i] = acc;
  }
  return out;
}

Matrix vstack(const Matrix& top, const Matrix& bottom) {
  require_same_field(top, bottom);
  if (top.cols() != bottom.cols()) {
    throw Error(Errc::dimension_mismatch, kModule,
                "cannot stack " + dims(top) + " over " + dims(bottom));
  }
  std::vector<Element> data(top.data().begin(), top.data().end());
  data.insert(data.end(), bottom.data().begin(), bottom.data().end());
  return Matrix(top.field_ptr(), top.rows() + bottom.rows(), top.cols(), std::move(data));
}

Matrix submatrix(const Matrix& a, std::span<const std::size_t> row_idx,
                 std::span<const std::size_t> col_idx) {
  Matrix out(a.field_ptr(), row_idx.size(), col_idx.size());
  for (std::size_t i = 0; i < row_idx.size(); ++i) {
    if (row_idx[i] >= a.rows()) {
      throw Error(Errc::dimension_mismatch, kModule, "row index out of range");
    }
    for (std::size_t j = 0; j < col_idx.size(); ++j) {
      if (col_idx[j] >= a.cols()) {
        throw Error(Errc::dimension_mismatch, kModule, "column index out of range");
      }
      out(i, j) = a(row_idx[i], col_idx[j]);
    }
  }
  return out;
}

Matrix select_rows(const Matrix& a, std::span<const std::size_t> row_idx) {
  Matrix out(a.field_ptr(), 0, a.cols());
  for (std::size_t r : row_idx) {
    if (r >= a.rows()) {
      throw Error(Errc::dimension_mismatch, kModule, "row index out of range");
    }
    out.append_row(a.row(r));
  }
  return out;
}

Matrix invert(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(Errc::singular_matrix, kModule, "cannot invert non-square " + dims(a));
  }
  const std::size_t n = a.rows();
  Matrix aug(a.field_ptr(), n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = Element(1);
  }
  const auto pivots = reduce(aug);
  if (pivots.size() < n || (n > 0 && pivots[n - 1] != n - 1)) {
    throw Error(Errc::singular_matrix, kModule, "matrix " + dims(a) + " is singular");
  }
  Matrix inv(a.field_ptr(), n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  }
  return inv;
}

Vector solve(const Matrix& a, std::span<const Element> b) {
  if (b.size() != a.rows()) {
    throw Error(Errc::dimension_mismatch, kModule,
                "right-hand side of length " + std::to_string(b.size()) + " against " +
                    dims(a));
  }
  const std::size_t n = a.cols();
  Matrix aug(a.field_ptr(), a.rows(), n + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n) = b[i];
  }
  const auto pivots = reduce(aug);
  if (!pivots.empty() && pivots.back() == n) {
    throw Error(Errc::inconsistent_system, kModule, "system has no solution");
  }
  Vector x(n);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, n);
  return x;
}

Matrix null_space(const Matrix& a) {
  Matrix work = a;
  const auto pivots = reduce(work);
  std::vector<bool> is_pivot(a.cols(), false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  Matrix basis(a.field_ptr(), 0, a.cols());
  Vector v(a.cols());
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::fill(v.begin(), v.end(), Element{});
    v[free] = Element(1);
    // Characteristic 2: x_pivot = -coef * x_free = coef * x_free.
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = work(r, free);
    basis.append_row(v);
  }
  return basis;
}

std::optional<MinorCounterexample> all_square_submatrices_nonsingular(
    const Matrix& a, std::size_t max_order, std::size_t minor_cap) {
  if (max_order > std::min(a.rows(), a.cols())) {
    throw Error(Errc::invalid_argument, kModule,
                "max_order exceeds min(rows, cols) of " + dims(a));
  }
  std::uint64_t total = 0;
  for (std::size_t r = 1; r <= max_order; ++r) {
    total += binomial(a.rows(), r) * binomial(a.cols(), r);
    if (total > minor_cap) {
      throw Error(Errc::cap_exceeded, kModule,
                  "more than " + std::to_string(minor_cap) + " minors to check");
    }
  }
  for (std::size_t order = 1; order <= max_order; ++order) {
    auto rows = first_combination(order);
    do {
      auto cols = first_combination(order);
      do {
        if (rank(submatrix(a, rows, cols)) < order) {
          return MinorCounterexample{rows, cols};
        }
      } while (next_combination(cols, a.cols()));
    } while (next_combination(rows, a.rows()));
  }
  return std::nullopt;
}

}  // namespace weavesafe::linalg
