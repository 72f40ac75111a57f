#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace scenekit {

/// Dense row-major matrix of finite, non-negative costs. Rectangular allowed.
class CostMatrix {
 public:
  CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  explicit CostMatrix(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t row, std::size_t col) const noexcept { return values_[row * cols_ + col]; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

using Assignment = std::vector<std::pair<std::size_t, std::size_t>>;

/// Minimum-cost matching of size min(rows, cols), pairs sorted by row.
/// Among equal-cost optima the lexicographically smallest pair sequence is
/// returned. Throws std::invalid_argument for an empty matrix.
Assignment solve_assignment(const CostMatrix& costs);

double assignment_cost(const CostMatrix& costs, const Assignment& assignment);

}  // namespace scenekit
