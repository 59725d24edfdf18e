#pragma once

// Independent reference implementations used as test oracles. Nothing here
// goes through the library's tables or elimination code.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "weavesafe/matrix.hpp"

namespace testing_support {

using weavesafe::gf::Element;
using weavesafe::linalg::Matrix;
using weavesafe::linalg::Vector;

// Shift-and-add multiply, reducing after each shift.
inline std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b, std::uint32_t poly, unsigned m) {
  std::uint32_t r = 0;
  for (int i = static_cast<int>(m) - 1; i >= 0; --i) {
    r <<= 1;
    if (r & (1u << m)) r ^= poly;
    if (b & (1u << i)) r ^= a;
  }
  return r;
}

// Determinant by Laplace expansion along the first row, using slow_mul and a
// brute-force inverse only where needed. Small orders only.
inline std::uint32_t slow_det(const std::vector<std::vector<std::uint32_t>>& a,
                              std::uint32_t poly, unsigned m) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  if (n == 1) return a[0][0];
  std::uint32_t acc = 0;  // signs vanish in characteristic 2
  for (std::size_t c = 0; c < n; ++c) {
    if (a[0][c] == 0) continue;
    std::vector<std::vector<std::uint32_t>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<std::uint32_t> row;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != c) row.push_back(a[r][j]);
      }
      minor.push_back(row);
    }
    acc ^= slow_mul(a[0][c], slow_det(minor, poly, m), poly, m);
  }
  return acc;
}

inline std::vector<std::vector<std::uint32_t>> values(const Matrix& a) {
  std::vector<std::vector<std::uint32_t>> out(a.rows(), std::vector<std::uint32_t>(a.cols()));
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out[r][c] = a(r, c).value();
  }
  return out;
}

inline Vector random_vector(std::mt19937_64& rng, std::size_t len, std::uint32_t order) {
  std::uniform_int_distribution<std::uint32_t> dist(0, order - 1);
  Vector v(len);
  for (auto& x : v) x = Element(dist(rng));
  return v;
}

inline Matrix random_matrix(std::mt19937_64& rng, const weavesafe::gf::FieldPtr& f,
                            std::size_t rows, std::size_t cols) {
  Matrix a(f, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    auto v = random_vector(rng, cols, f->order());
    std::copy(v.begin(), v.end(), a.row(r).begin());
  }
  return a;
}

// Temporary directory removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("weavesafe-" + tag + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing_support
