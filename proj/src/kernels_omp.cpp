#include <cmath>
#include <cstdint>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "omatch/kernels.hpp"

namespace omatch::kernels {

namespace parallel {

Matrix gemm_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("gemm_nt: inner dimension mismatch");
  Matrix out(a.rows(), b.rows());
  const auto rows = static_cast<std::int64_t>(a.rows());
  const std::size_t cols = b.rows();
  const std::size_t dim = a.cols();
  const bool big = a.rows() * cols * dim >= kMinParallelWork;

#pragma omp parallel for schedule(static) if (big)
  for (std::int64_t i = 0; i < rows; ++i) {
    const double* ai = a.row(static_cast<std::size_t>(i)).data();
    double* oi = out.row(static_cast<std::size_t>(i)).data();
    for (std::size_t j = 0; j < cols; ++j) {
      const double* bj = b.row(j).data();
      double sum = 0.0;
      for (std::size_t k = 0; k < dim; ++k) sum += ai[k] * bj[k];
      oi[j] = sum;
    }
  }
  return out;
}

std::size_t normalize_rows(Matrix& m) {
  const auto rows = static_cast<std::int64_t>(m.rows());
  const bool big = m.rows() * m.cols() >= kMinParallelWork;
  std::int64_t first_zero = rows;

#pragma omp parallel for schedule(static) reduction(min : first_zero) if (big)
  for (std::int64_t i = 0; i < rows; ++i) {
    auto r = m.row(static_cast<std::size_t>(i));
    double sq = 0.0;
    for (double v : r) sq += v * v;
    const double norm = std::sqrt(sq);
    if (norm == 0.0) {
      first_zero = std::min(first_zero, i);
      continue;
    }
    for (double& v : r) v /= norm;
  }
  return static_cast<std::size_t>(first_zero);
}

}  // namespace parallel

void set_num_threads(int threads) {
#ifdef _OPENMP
  static const int default_threads = omp_get_max_threads();
  omp_set_num_threads(threads >= 1 ? threads : default_threads);
#else
  (void)threads;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace omatch::kernels
