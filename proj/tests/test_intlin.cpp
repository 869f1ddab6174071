#include "oracle.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <random>

using namespace fisplit;

namespace {

using oracle::det_of;
using oracle::invariant_factors_by_minors;
using oracle::random_matrix;

bool congruent(const Int& a, const Int& b, const Int& m) { return m == 0 ? a == b : divides(m, a - b); }

bool satisfies(const IntMatrix& A, const IntVector& x, const IntVector& b, const IntVector& mod) {
  IntVector y = A * std::span<const Int>(x);
  for (std::size_t i = 0; i < y.size(); ++i)
    if (!congruent(y[i], b[i], mod[i])) return false;
  return true;
}

// every x in [0, box)^n
void for_each_point(std::size_t n, long box, const std::function<void(const IntVector&)>& fn) {
  IntVector x(n, 0);
  while (true) {
    fn(x);
    std::size_t t = 0;
    while (t < n) {
      x[t] += 1;
      if (x[t] < box) break;
      x[t] = 0;
      ++t;
    }
    if (t == n) return;
  }
}

}  // namespace

TEST(Snf, Identity) {
  auto d = snf(IntMatrix::identity(3));
  EXPECT_EQ(d.S, IntMatrix::identity(3));
}

TEST(Snf, Zero) {
  auto d = snf(IntMatrix(2, 2));
  EXPECT_EQ(d.S, IntMatrix(2, 2));
  EXPECT_EQ(d.rank, 0u);
}

TEST(Snf, TwoByTwoExample) {
  IntMatrix A = IntMatrix::from_rows({{2, 4}, {6, 8}});
  auto d = snf(A);
  EXPECT_EQ(d.S, IntMatrix::from_rows({{2, 0}, {0, 4}}));
  EXPECT_EQ(invariant_factors_by_minors(A), (std::vector<Int>{2, 4}));
}

TEST(Snf, EmptyMatrices) {
  auto d = snf(IntMatrix(0, 3));
  EXPECT_EQ(d.V.rows(), 3u);
  EXPECT_EQ(d.U.rows(), 0u);
  auto e = snf(IntMatrix(2, 0));
  EXPECT_EQ(e.U, IntMatrix::identity(2));
}

TEST(Snf, RandomMatricesAgainstMinors) {
  std::mt19937 rng(20240601);
  std::uniform_int_distribution<int> dim(1, 6);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t r = dim(rng), c = dim(rng);
    IntMatrix A = random_matrix(rng, r, c, -20, 20);
    if (trial % 7 == 0 && r > 1)  // force rank deficiency now and then
      for (std::size_t j = 0; j < c; ++j) A(r - 1, j) = 2 * A(0, j);
    auto d = snf(A);
    ASSERT_EQ(d.U * A * d.V, d.S) << A.to_string();
    ASSERT_EQ(abs(det_of(d.U)), 1);
    ASSERT_EQ(abs(det_of(d.V)), 1);
    ASSERT_EQ(d.U * d.U_inv, IntMatrix::identity(r));
    ASSERT_EQ(d.V * d.V_inv, IntMatrix::identity(c));
    auto diag = d.diagonal();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (i != j) {
          ASSERT_EQ(d.S(i, j), 0);
        }
    for (std::size_t i = 0; i < diag.size(); ++i) {
      ASSERT_GE(diag[i], 0);
      if (i + 1 < diag.size()) {
        ASSERT_TRUE(divides(diag[i], diag[i + 1])) << A.to_string();
      }
    }
    if (trial % 4 == 0) {
      ASSERT_EQ(diag, invariant_factors_by_minors(A)) << A.to_string();
    }
  }
}

TEST(Snf, DeterminantMatchesCofactors) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + trial % 5;
    IntMatrix A = random_matrix(rng, n, n, -9, 9);
    ASSERT_EQ(determinant(A), det_of(A));
  }
}

TEST(Hermite, CanonicalForSameLattice) {
  IntMatrix a = IntMatrix::from_rows({{2, 4}, {0, 6}});
  IntMatrix b = IntMatrix::from_rows({{2, 10}, {2, 4}, {4, 14}});
  EXPECT_EQ(hermite_rows(a), hermite_rows(b));
  EXPECT_TRUE(hermite_coordinates(hermite_rows(a), IntVector{4, 2}).has_value());
  EXPECT_FALSE(hermite_coordinates(hermite_rows(a), IntVector{1, 0}).has_value());
}

TEST(Congruences, Examples) {
  {
    IntMatrix A = IntMatrix::from_rows({{1}});
    auto x = solve_congruences(A, IntVector{1}, IntVector{0});
    ASSERT_TRUE(x);
    EXPECT_EQ((*x)[0], 1);
  }
  {
    IntMatrix A = IntMatrix::from_rows({{2}});
    EXPECT_FALSE(solve_congruences(A, IntVector{1}, IntVector{4}));
    for (int r = 0; r < 4; ++r) EXPECT_FALSE(divides(4, 2 * r - 1));
  }
  {
    IntMatrix A = IntMatrix::from_rows({{1, 1}, {1, 0}});
    IntVector b{1, 0}, mod{2, 0};
    auto x = solve_congruences(A, b, mod);
    ASSERT_TRUE(x);
    EXPECT_TRUE(satisfies(A, *x, b, mod));
    EXPECT_EQ((*x)[0], 0);
    EXPECT_TRUE(satisfies(A, IntVector{0, 1}, b, mod));
  }
}

TEST(Congruences, DimensionMismatchThrows) {
  IntMatrix A = IntMatrix::from_rows({{1, 2}});
  EXPECT_THROW(solve_congruences(A, IntVector{1, 2}, IntVector{0}), std::invalid_argument);
  EXPECT_THROW(solution_lattice(A, IntVector{0, 0}), std::invalid_argument);
}

TEST(Congruences, AgreeWithExhaustiveSearch) {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> nd(1, 3), md(2, 12), ed(-6, 6);
  int solvable = 0, unsolvable = 0;
  for (int trial = 0; trial < 400; ++trial) {
    std::size_t rows = nd(rng), n = 1 + trial % 2;
    IntVector mod(rows), b(rows);
    Int box = 1, prod = 1;
    for (std::size_t i = 0; i < rows; ++i) {
      mod[i] = md(rng);
      prod *= mod[i];
      box = lcm(box, mod[i]);
      b[i] = ed(rng);
    }
    if (prod > 10000) continue;
    IntMatrix A = random_matrix(rng, rows, n, -6, 6);
    bool found = false;
    for_each_point(n, box.get_si(), [&](const IntVector& x) { found = found || satisfies(A, x, b, mod); });
    auto x = solve_congruences(A, b, mod);
    ASSERT_EQ(found, x.has_value()) << A.to_string();
    if (x) {
      ASSERT_TRUE(satisfies(A, *x, b, mod));
      ++solvable;
    } else {
      ++unsolvable;
    }
  }
  EXPECT_GT(solvable, 20);
  EXPECT_GT(unsolvable, 20);
}

TEST(SolutionLattice, Examples) {
  EXPECT_EQ(solution_lattice(IntMatrix::from_rows({{1}}), IntVector{0}).cols(), 0u);
  EXPECT_EQ(solution_lattice(IntMatrix::from_rows({{2}}), IntVector{4}), IntMatrix::from_rows({{2}}));
  EXPECT_EQ(solution_lattice(IntMatrix::from_rows({{1, 1}}), IntVector{0}), IntMatrix::from_rows({{1}, {-1}}));
}

TEST(SolutionLattice, MembershipBothWays) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> md(0, 9), cd(-5, 5);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t rows = 1 + trial % 3, n = 1 + (trial / 3) % 3;
    IntVector mod(rows);
    for (auto& m : mod) m = md(rng) == 1 ? 0 : md(rng);
    IntMatrix A = random_matrix(rng, rows, n, -5, 5);
    IntMatrix L = solution_lattice(A, mod);
    IntVector zero(rows);
    for (std::size_t c = 0; c < L.cols(); ++c) ASSERT_TRUE(satisfies(A, L.col(c), zero, mod));
    IntVector comb(n);
    for (std::size_t c = 0; c < L.cols(); ++c) {
      Int k = cd(rng);
      for (std::size_t i = 0; i < n; ++i) comb[i] += k * L(i, c);
    }
    ASSERT_TRUE(satisfies(A, comb, zero, mod));
    IntMatrix H = hermite_rows(L.transpose());
    for_each_point(n, 7, [&](const IntVector& x) {
      for (int sign : {1, -1}) {
        IntVector y = x;
        for (auto& v : y) v *= sign;
        if (satisfies(A, y, zero, mod)) {
          ASSERT_TRUE(hermite_coordinates(H, y).has_value()) << A.to_string();
        }
      }
    });
  }
}
