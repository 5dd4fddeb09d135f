#include "omatch/hungarian.hpp"

#include <limits>
#include <stdexcept>

namespace omatch::hungarian {

Solution solve_min_cost(const Matrix& cost) {
  if (cost.rows() != cost.cols()) throw std::invalid_argument("solve_min_cost: matrix must be square");
  const std::size_t n = cost.rows();
  constexpr double inf = std::numeric_limits<double>::infinity();

  // 1-based potentials and matching; index 0 is the virtual root column.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<double> minv(n + 1);
  std::vector<char> used(n + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
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
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Solution s;
  s.row_to_col.assign(n, -1);
  s.row_potential.assign(u.begin() + 1, u.end());
  s.col_potential.assign(v.begin() + 1, v.end());
  for (std::size_t j = 1; j <= n; ++j) s.row_to_col[match[j] - 1] = static_cast<int>(j - 1);
  for (std::size_t i = 0; i < n; ++i) s.cost += cost(i, static_cast<std::size_t>(s.row_to_col[i]));
  return s;
}

}  // namespace omatch::hungarian
