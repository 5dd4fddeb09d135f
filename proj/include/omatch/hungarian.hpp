#pragma once

#include <vector>

#include "omatch/matrix.hpp"

namespace omatch::hungarian {

struct Solution {
  std::vector<int> row_to_col;  // one column per row
  std::vector<double> row_potential;
  std::vector<double> col_potential;
  double cost = 0.0;
};

// Minimum-cost perfect matching on a square cost matrix (shortest augmenting
// path form of the Hungarian method, O(n^3)). The returned potentials satisfy
// cost(i, j) - row_potential[i] - col_potential[j] >= 0 up to rounding, with
// equality on every matched cell.
Solution solve_min_cost(const Matrix& cost);

}  // namespace omatch::hungarian
