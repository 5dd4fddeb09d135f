#include <cmath>
#include <stdexcept>

#include "omatch/kernels.hpp"

namespace omatch::kernels::serial {

double dot(std::span<const double> x, std::span<const double> y) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
  return sum;
}

double l2_norm(std::span<const double> x) { return std::sqrt(dot(x, x)); }

Matrix gemm_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("gemm_nt: inner dimension mismatch");
  Matrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j) out(i, j) = dot(a.row(i), b.row(j));
  return out;
}

std::size_t normalize_rows(Matrix& m) {
  std::size_t first_zero = m.rows();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    const double norm = l2_norm(r);
    if (norm == 0.0) {
      if (first_zero == m.rows()) first_zero = i;
      continue;
    }
    for (double& v : r) v /= norm;
  }
  return first_zero;
}

}  // namespace omatch::kernels::serial
