#include "oracles.hpp"

#include "scenekit/assignment.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

using namespace scenekit;

namespace {

CostMatrix random_matrix(std::mt19937_64& gen, std::size_t rows, std::size_t cols, bool integral) {
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::uniform_int_distribution<int> k(0, 4);
  std::vector<double> v(rows * cols);
  for (auto& x : v) x = integral ? k(gen) : u(gen);
  return CostMatrix(rows, cols, std::move(v));
}

void expect_valid(const CostMatrix& m, const Assignment& a) {
  EXPECT_EQ(a.size(), std::min(m.rows(), m.cols()));
  std::vector<bool> row(m.rows()), col(m.cols());
  for (const auto& [r, c] : a) {
    ASSERT_LT(r, m.rows());
    ASSERT_LT(c, m.cols());
    EXPECT_FALSE(row[r]);
    EXPECT_FALSE(col[c]);
    row[r] = col[c] = true;
  }
}

}  // namespace

TEST(SolveAssignment, Examples) {
  const CostMatrix identity({{0, 1}, {1, 0}});
  EXPECT_EQ(solve_assignment(identity), (Assignment{{0, 0}, {1, 1}}));
  EXPECT_DOUBLE_EQ(assignment_cost(identity, solve_assignment(identity)), 0.0);

  const CostMatrix cross({{4, 1}, {2, 3}});
  EXPECT_EQ(solve_assignment(cross), (Assignment{{0, 1}, {1, 0}}));
  EXPECT_DOUBLE_EQ(assignment_cost(cross, solve_assignment(cross)), 3.0);

  const CostMatrix single(std::vector<std::vector<double>>{{5}});
  EXPECT_EQ(solve_assignment(single), (Assignment{{0, 0}}));
  EXPECT_DOUBLE_EQ(assignment_cost(single, solve_assignment(single)), 5.0);
}

TEST(SolveAssignment, Errors) {
  EXPECT_THROW(solve_assignment(CostMatrix(0, 0, {})), std::invalid_argument);
  EXPECT_THROW(solve_assignment(CostMatrix(2, 0, {})), std::invalid_argument);
  EXPECT_THROW(CostMatrix({{1, std::numeric_limits<double>::quiet_NaN()}}), std::invalid_argument);
  EXPECT_THROW(CostMatrix({{1, std::numeric_limits<double>::infinity()}}), std::invalid_argument);
  EXPECT_THROW(CostMatrix(std::vector<std::vector<double>>{{-1}}), std::invalid_argument);
  EXPECT_THROW(CostMatrix({{1, 2}, {3}}), std::invalid_argument);
}

TEST(SolveAssignment, MatchesBruteForce) {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + trial % 7;
    const CostMatrix m = random_matrix(gen, n, n, trial % 2 == 0);
    const Assignment a = solve_assignment(m);
    expect_valid(m, a);
    EXPECT_DOUBLE_EQ(assignment_cost(m, a), oracle::brute_force_min_cost(m)) << trial;
  }
}

TEST(SolveAssignment, Rectangular) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + trial % 6;
    const std::size_t cols = 1 + (trial / 6) % 6;
    const CostMatrix m = random_matrix(gen, rows, cols, false);
    const Assignment a = solve_assignment(m);
    expect_valid(m, a);
    EXPECT_NEAR(assignment_cost(m, a), oracle::brute_force_min_cost(m), 1e-9);

    // Pad to square with a constant above every entry; real pairs agree.
    const std::size_t n = std::max(rows, cols);
    std::vector<double> padded(n * n, 100.0);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) padded[r * n + c] = m(r, c);
    }
    const CostMatrix sq(n, n, padded);
    Assignment real;
    for (const auto& [r, c] : solve_assignment(sq)) {
      if (r < rows && c < cols) real.emplace_back(r, c);
    }
    EXPECT_NEAR(assignment_cost(m, real), assignment_cost(m, a), 1e-9);
  }
}

TEST(SolveAssignment, PermutationEquivariance) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 5;
    // Continuous costs make the optimum unique with probability one.
    const CostMatrix m = random_matrix(gen, n, n, false);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    std::vector<double> v(n * n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) v[r * n + c] = m(perm[r], c);
    }
    const Assignment base = solve_assignment(m);
    const Assignment permuted = solve_assignment(CostMatrix(n, n, v));
    for (const auto& [r, c] : permuted) {
      EXPECT_NE(std::find(base.begin(), base.end(), std::pair{perm[r], c}), base.end());
    }
  }
}

TEST(SolveAssignment, LexicographicTieBreak) {
  const CostMatrix flat({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
  EXPECT_EQ(solve_assignment(flat), (Assignment{{0, 0}, {1, 1}, {2, 2}}));

  // Two optima of cost 2: {(0,0),(1,1)} and {(0,1),(1,0)}.
  const CostMatrix two({{1, 1}, {1, 1}});
  EXPECT_EQ(solve_assignment(two), (Assignment{{0, 0}, {1, 1}}));

  // Optima {(0,1),(1,0),(2,2)} and {(0,1),(1,2),(2,0)}: the smaller second pair wins.
  const CostMatrix m({{5, 0, 5}, {1, 5, 1}, {1, 5, 1}});
  EXPECT_EQ(solve_assignment(m), (Assignment{{0, 1}, {1, 0}, {2, 2}}));

  const CostMatrix wide({{0, 0, 0}});
  EXPECT_EQ(solve_assignment(wide), (Assignment{{0, 0}}));
  const CostMatrix tall(std::vector<std::vector<double>>{{0}, {0}, {0}});
  EXPECT_EQ(solve_assignment(tall), (Assignment{{0, 0}}));
}
