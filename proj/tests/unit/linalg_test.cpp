#include <random>

#include <gtest/gtest.h>

#include "support.hpp"
#include "weavesafe/combinations.hpp"
#include "weavesafe/error.hpp"
#include "weavesafe/matrix.hpp"

using namespace weavesafe::linalg;
using weavesafe::Errc;
using weavesafe::Error;
using weavesafe::gf::Element;
using weavesafe::gf::Field;
using namespace testing_support;

namespace {

// Largest order of a nonzero minor, by cofactor expansion.
std::size_t rank_by_minors(const Matrix& a) {
  const auto& f = a.field();
  for (std::size_t order = std::min(a.rows(), a.cols()); order > 0; --order) {
    auto rows = weavesafe::first_combination(order);
    do {
      auto cols = weavesafe::first_combination(order);
      do {
        if (slow_det(values(submatrix(a, rows, cols)), f.reduction_polynomial(),
                     f.degree()) != 0) {
          return order;
        }
      } while (weavesafe::next_combination(cols, a.cols()));
    } while (weavesafe::next_combination(rows, a.rows()));
  }
  return 0;
}

std::vector<Element> points(std::uint32_t from, std::uint32_t to) {
  std::vector<Element> out;
  for (std::uint32_t v = from; v < to; ++v) out.emplace_back(v);
  return out;
}

}  // namespace

TEST(Linalg, CauchySingleEntry) {
  auto f = Field::create(3);
  const Element r[] = {Element(1)};
  const Element c[] = {Element(2)};
  const Matrix m = cauchy(f, r, c);
  EXPECT_EQ(m(0, 0), Element(6));
}

TEST(Linalg, CauchyRejectsOverlapAndDuplicates) {
  auto f = Field::create(3);
  const Element r[] = {Element(1), Element(2)};
  const Element c[] = {Element(1), Element(3)};
  EXPECT_THROW(cauchy(f, r, c), Error);
  const Element dup[] = {Element(4), Element(4)};
  EXPECT_THROW(cauchy(f, dup, c), Error);
}

TEST(Linalg, CauchyNineByFourOverGf16HasNoZeroEntry) {
  auto f = Field::create(4);
  const auto rows = points(0, 9);
  const auto cols = points(9, 13);
  const Matrix m = cauchy(f, rows, cols);
  ASSERT_EQ(m.rows(), 9u);
  ASSERT_EQ(m.cols(), 4u);
  for (Element e : m.data()) EXPECT_FALSE(e.is_zero());
}

TEST(Linalg, RankExamples) {
  auto f = Field::create(4);
  EXPECT_EQ(rank(Matrix(f, 3, 3)), 0u);
  EXPECT_EQ(rank(Matrix::identity(f, 4)), 4u);
  const Matrix dep = Matrix::from_values(f, {{1, 2, 3}, {7, f->mul(Element(7), Element(2)).value(),
                                                         f->mul(Element(7), Element(3)).value()}});
  EXPECT_EQ(rank(dep), 1u);
}

TEST(Linalg, RankMatchesMinorOracle) {
  std::mt19937_64 rng(3);
  auto f = Field::create(3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t r = 1 + rng() % 4;
    const std::size_t c = 1 + rng() % 5;
    Matrix a = random_matrix(rng, f, r, c);
    // sprinkle in dependencies
    if (r >= 2 && trial % 3 == 0) {
      for (std::size_t j = 0; j < c; ++j) a(r - 1, j) = a(0, j) + a(r - 2, j);
    }
    ASSERT_EQ(rank(a), rank_by_minors(a)) << "trial " << trial;
  }
}

TEST(Linalg, RankProperties) {
  std::mt19937_64 rng(5);
  auto f = Field::create(4);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix a = random_matrix(rng, f, 1 + rng() % 5, 6);
    const Matrix b = random_matrix(rng, f, 1 + rng() % 5, 6);
    EXPECT_LE(rank(vstack(a, b)), rank(a) + rank(b));
    EXPECT_EQ(rank(a), rank(transpose(a)));
  }
}

TEST(Linalg, InvertIdentityAndRandom) {
  std::mt19937_64 rng(9);
  auto f = Field::create(4);
  EXPECT_EQ(invert(Matrix::identity(f, 5)), Matrix::identity(f, 5));
  int done = 0;
  while (done < 50) {
    const Matrix a = random_matrix(rng, f, 5, 5);
    if (slow_det(values(a), f->reduction_polynomial(), 4) == 0) {
      EXPECT_THROW(invert(a), Error);
      continue;
    }
    const Matrix inv = invert(a);
    ASSERT_EQ(mat_mul(a, inv), Matrix::identity(f, 5));
    ASSERT_EQ(mat_mul(inv, a), Matrix::identity(f, 5));
    ++done;
  }
}

TEST(Linalg, InvertSingularAndNonSquare) {
  auto f = Field::create(4);
  try {
    invert(Matrix(f, 2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::singular_matrix);
  }
  EXPECT_THROW(invert(Matrix(f, 2, 3)), Error);
}

TEST(Linalg, SolveIdentityAndConsistentSystems) {
  std::mt19937_64 rng(13);
  auto f = Field::create(8);
  const Vector b = random_vector(rng, 3, 256);
  EXPECT_EQ(solve(Matrix::identity(f, 3), b), b);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix a = random_matrix(rng, f, 1 + rng() % 6, 1 + rng() % 6);
    const Vector x = random_vector(rng, a.cols(), 256);
    const Vector rhs = mat_vec(a, x);
    ASSERT_EQ(mat_vec(a, solve(a, rhs)), rhs);
  }
}

TEST(Linalg, SolveInconsistent) {
  auto f = Field::create(4);
  const Matrix a = Matrix::from_values(f, {{1, 1}, {1, 1}});
  const Vector b = {Element(1), Element(2)};
  try {
    solve(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::inconsistent_system);
  }
}

TEST(Linalg, NullSpaceIsAnnihilatedAndComplete) {
  std::mt19937_64 rng(17);
  auto f = Field::create(4);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix a = random_matrix(rng, f, 1 + rng() % 5, 1 + rng() % 7);
    const Matrix ns = null_space(a);
    EXPECT_EQ(ns.rows() + rank(a), a.cols());
    EXPECT_EQ(rank(ns), ns.rows());
    for (std::size_t r = 0; r < ns.rows(); ++r) {
      for (Element e : mat_vec(a, ns.row(r))) ASSERT_TRUE(e.is_zero());
    }
  }
}

TEST(Linalg, DimensionMismatch) {
  auto f = Field::create(4);
  EXPECT_THROW(mat_mul(Matrix(f, 2, 3), Matrix(f, 2, 3)), Error);
  EXPECT_THROW(vstack(Matrix(f, 2, 3), Matrix(f, 2, 4)), Error);
  const Vector x(2);
  EXPECT_THROW(mat_vec(Matrix(f, 2, 3), x), Error);
}

TEST(Linalg, SubmatrixAndTranspose) {
  auto f = Field::create(4);
  const Matrix a = Matrix::from_values(f, {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
  const std::size_t rows[] = {0, 2};
  const std::size_t cols[] = {1};
  EXPECT_EQ(submatrix(a, rows, cols), Matrix::from_values(f, {{2}, {8}}));
  EXPECT_EQ(transpose(a)(0, 2), Element(7));
}

TEST(Linalg, CauchyMinorsAllNonsingularUpToSixBySix) {
  auto f = Field::create(4);
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto rows = points(0, n);
    const auto cols = points(n, 2 * n);
    const Matrix c = cauchy(f, rows, cols);
    EXPECT_FALSE(all_square_submatrices_nonsingular(c, n).has_value()) << n;
    // cross-check the full determinant with the cofactor oracle
    EXPECT_NE(slow_det(values(c), f->reduction_polynomial(), 4), 0u);
  }
  const Matrix tall = cauchy(f, points(0, 9), points(9, 13));
  EXPECT_FALSE(all_square_submatrices_nonsingular(tall, 4).has_value());
}

TEST(Linalg, ZeroEntryGivesOneByOneCounterexample) {
  auto f = Field::create(4);
  const Matrix a = Matrix::from_values(f, {{1, 2}, {3, 0}});
  const auto bad = all_square_submatrices_nonsingular(a, 2);
  ASSERT_TRUE(bad.has_value());
  EXPECT_EQ(bad->rows, std::vector<std::size_t>{1});
  EXPECT_EQ(bad->cols, std::vector<std::size_t>{1});
}

// Vandermonde V(i,j) = a_i^j can hide singular minors; search exhaustively and
// confirm whatever is found with the cofactor oracle.
TEST(Linalg, VandermondeSingularMinorSearch) {
  auto f = Field::create(4);
  Matrix v(f, 9, 4);
  for (std::size_t i = 0; i < 9; ++i) {
    for (std::size_t j = 0; j < 4; ++j) v(i, j) = f->pow(Element(i + 1), j);
  }
  const auto bad = all_square_submatrices_nonsingular(v, 4);
  ASSERT_TRUE(bad.has_value());
  EXPECT_EQ(slow_det(values(submatrix(v, bad->rows, bad->cols)), f->reduction_polynomial(), 4),
            0u);
}

TEST(Linalg, MinorCheckCap) {
  auto f = Field::create(8);
  const Matrix c = cauchy(f, points(0, 40), points(40, 80));
  try {
    all_square_submatrices_nonsingular(c, 20, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::cap_exceeded);
  }
}
