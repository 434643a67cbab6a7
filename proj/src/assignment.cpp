#include "protorecon/assignment.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace protorecon {

Assignment assign_min_cost(const CostMatrix& cost) {
  const std::size_t n = cost.rows();
  if (cost.cols() != n) throw std::invalid_argument("assign_min_cost: matrix is not square");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(cost(i, j))) {
        throw std::invalid_argument("assign_min_cost: non-finite cost entry");
      }
    }
  }
  Assignment result;
  if (n == 0) return result;

  // Shortest augmenting paths over reduced costs; index 0 is a virtual
  // column used as the root of each search.
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0);  // column -> row (1-based), 0 = free
  std::vector<std::size_t> way(n + 1, 0);
  std::vector<double> minv(n + 1);
  std::vector<char> used(n + 1);

  for (std::size_t row = 1; row <= n; ++row) {
    match[0] = row;
    std::size_t col0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const std::size_t r0 = match[col0];
      double delta = inf;
      std::size_t col1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(r0 - 1, j - 1) - u[r0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = col0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          col1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  result.row_to_col.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) result.row_to_col[match[j] - 1] = j - 1;
  for (std::size_t i = 0; i < n; ++i) result.total += cost(i, result.row_to_col[i]);
  return result;
}

}  // namespace protorecon
