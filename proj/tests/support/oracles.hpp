#pragma once

// Independent reference computations used only by tests. Nothing here calls
// into the library code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "omatch/matrix.hpp"
#include "omatch/rng.hpp"

namespace oracle {

// out(i, j) = sum_k a(i, k) * b(j, k), written as the textbook triple loop.
inline omatch::Matrix naive_product_nt(const omatch::Matrix& a, const omatch::Matrix& b) {
  omatch::Matrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(j, k);
      out(i, j) = s;
    }
  return out;
}

// Best total similarity over all one-to-one assignments of min(rows, cols)
// pairs, by enumerating permutations of the larger side.
inline double brute_force_max_assignment(const omatch::Matrix& s) {
  const bool rows_small = s.rows() <= s.cols();
  const std::size_t small = rows_small ? s.rows() : s.cols();
  const std::size_t large = rows_small ? s.cols() : s.rows();
  std::vector<std::size_t> perm(large);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = -std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < small; ++i) total += rows_small ? s(i, perm[i]) : s(perm[i], i);
    best = std::max(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline omatch::Matrix random_matrix(omatch::Rng& rng, std::size_t rows, std::size_t cols, double lo = -1.0,
                                    double hi = 1.0) {
  omatch::Matrix m(rows, cols);
  for (double& v : m.data()) v = lo + (hi - lo) * rng.uniform();
  return m;
}

inline std::vector<std::vector<double>> random_vectors(omatch::Rng& rng, std::size_t count, std::size_t dim) {
  std::vector<std::vector<double>> out(count, std::vector<double>(dim));
  for (auto& v : out)
    for (double& x : v) x = rng.normal();
  return out;
}

// Random orthogonal matrix from Gram-Schmidt on Gaussian columns.
inline omatch::Matrix random_orthogonal(omatch::Rng& rng, std::size_t n) {
  omatch::Matrix q(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.normal();
    for (std::size_t j = 0; j < i; ++j) {
      double d = 0.0;
      for (std::size_t k = 0; k < n; ++k) d += v[k] * q(j, k);
      for (std::size_t k = 0; k < n; ++k) v[k] -= d * q(j, k);
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (std::size_t k = 0; k < n; ++k) q(i, k) = v[k] / norm;
  }
  return q;
}

inline std::vector<double> apply(const omatch::Matrix& q, const std::vector<double>& v) {
  std::vector<double> out(q.rows(), 0.0);
  for (std::size_t i = 0; i < q.rows(); ++i)
    for (std::size_t k = 0; k < q.cols(); ++k) out[i] += q(i, k) * v[k];
  return out;
}

}  // namespace oracle
