#include "scenekit/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace scenekit {

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) throw std::invalid_argument("cost matrix size mismatch");
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("cost matrix entries must be finite");
    if (v < 0.0) throw std::invalid_argument("cost matrix entries must be non-negative");
  }
}

namespace {

std::vector<double> flatten(const std::vector<std::vector<double>>& rows) {
  std::vector<double> out;
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != cols) throw std::invalid_argument("cost matrix rows must have equal length");
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

}  // namespace

CostMatrix::CostMatrix(const std::vector<std::vector<double>>& rows)
    : CostMatrix(rows.size(), rows.empty() ? 0 : rows.front().size(), flatten(rows)) {}

double assignment_cost(const CostMatrix& costs, const Assignment& assignment) {
  double total = 0.0;
  for (const auto& [r, c] : assignment) total += costs(r, c);
  return total;
}

namespace {

struct Solution {
  Assignment pairs;  // original indices, sorted by row
  double cost = 0.0;
  std::vector<double> row_dual;  // indexed by original row
  std::vector<double> col_dual;  // indexed by original col
};

// Shortest augmenting path Hungarian method with potentials on the
// sub-matrix rows x cols. O(n^2 m) for n = min side.
Solution hungarian(const CostMatrix& costs, const std::vector<std::size_t>& rows,
                   const std::vector<std::size_t>& cols) {
  Solution sol;
  sol.row_dual.assign(costs.rows(), 0.0);
  sol.col_dual.assign(costs.cols(), 0.0);
  if (rows.empty() || cols.empty()) return sol;

  const bool transposed = rows.size() > cols.size();
  const auto& left = transposed ? cols : rows;
  const auto& right = transposed ? rows : cols;
  auto at = [&](std::size_t i, std::size_t j) {
    return transposed ? costs(right[j - 1], left[i - 1]) : costs(left[i - 1], right[j - 1]);
  };

  const std::size_t n = left.size();
  const std::size_t m = right.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = at(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] == 0) continue;
    const std::size_t a = left[p[j] - 1];
    const std::size_t b = right[j - 1];
    sol.pairs.emplace_back(transposed ? b : a, transposed ? a : b);
  }
  std::sort(sol.pairs.begin(), sol.pairs.end());
  sol.cost = assignment_cost(costs, sol.pairs);
  for (std::size_t i = 1; i <= n; ++i) (transposed ? sol.col_dual : sol.row_dual)[left[i - 1]] = u[i];
  for (std::size_t j = 1; j <= m; ++j) (transposed ? sol.row_dual : sol.col_dual)[right[j - 1]] = v[j];
  return sol;
}

}  // namespace

Assignment solve_assignment(const CostMatrix& costs) {
  if (costs.rows() == 0 || costs.cols() == 0) throw std::invalid_argument("cost matrix is empty");

  std::vector<std::size_t> rows(costs.rows()), cols(costs.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = j;

  const Solution full = hungarian(costs, rows, cols);
  double max_entry = 0.0;
  for (double x : costs.values()) max_entry = std::max(max_entry, x);
  const double tol = 1e-9 * (1.0 + max_entry) * static_cast<double>(std::max(rows.size(), cols.size()));

  // Tie-break: walk the pair sequence and, at each position, take the
  // lexicographically smallest pair that still extends to an optimal
  // matching. Complementary slackness against the full problem's duals
  // prunes pairs that cannot appear in any optimum.
  auto tight = [&](std::size_t r, std::size_t c) {
    return costs(r, c) - full.row_dual[r] - full.col_dual[c] <= tol;
  };

  Assignment result;
  Assignment current = full.pairs;
  double remaining = full.cost;
  std::size_t need = current.size();
  std::vector<std::size_t> open_rows = rows;
  std::vector<std::size_t> open_cols = cols;

  while (need > 0) {
    std::pair<std::size_t, std::size_t> best = current.front();
    Assignment best_tail(current.begin() + 1, current.end());
    bool done = false;
    for (std::size_t r : open_rows) {
      if (r > best.first || done) break;
      std::vector<std::size_t> later_rows;
      for (std::size_t rr : open_rows) {
        if (rr > r) later_rows.push_back(rr);
      }
      if (std::min(later_rows.size(), open_cols.size() - 1) != need - 1) continue;
      for (std::size_t c : open_cols) {
        if (r == best.first && c >= best.second) {
          done = true;
          break;
        }
        if (!tight(r, c)) continue;
        std::vector<std::size_t> other_cols;
        for (std::size_t cc : open_cols) {
          if (cc != c) other_cols.push_back(cc);
        }
        const Solution sub = hungarian(costs, later_rows, other_cols);
        if (std::fabs(costs(r, c) + sub.cost - remaining) <= tol) {
          best = {r, c};
          best_tail = sub.pairs;
          done = true;
          break;
        }
      }
    }
    result.push_back(best);
    remaining -= costs(best.first, best.second);
    std::erase_if(open_rows, [&](std::size_t r) { return r <= best.first; });
    std::erase(open_cols, best.second);
    current = std::move(best_tail);
    --need;
  }
  return result;
}

}  // namespace scenekit
