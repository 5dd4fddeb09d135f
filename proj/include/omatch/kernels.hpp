#pragma once

#include <span>

#include "omatch/matrix.hpp"

// Dense kernels behind the similarity algebra. Each kernel exists twice: a
// plain serial loop kept as the reference that tests compare against, and an
// OpenMP version used by the library. Both produce bit-identical results
// because every output entry is reduced by a single thread in a fixed order.
namespace omatch::kernels {

// out(i, j) = <a.row(i), b.row(j)>, i.e. out = A * B^T. Requires a.cols() == b.cols().
namespace serial {
Matrix gemm_nt(const Matrix& a, const Matrix& b);
double dot(std::span<const double> x, std::span<const double> y);
double l2_norm(std::span<const double> x);
// Divides each row by its L2 norm in place. Returns the index of the first
// row whose norm is zero (or rows() when none), leaving such rows untouched.
std::size_t normalize_rows(Matrix& m);
}  // namespace serial

namespace parallel {
Matrix gemm_nt(const Matrix& a, const Matrix& b);
std::size_t normalize_rows(Matrix& m);
// Work below this many multiply-adds stays on the calling thread.
inline constexpr std::size_t kMinParallelWork = 1u << 15;
}  // namespace parallel

// Thread count used by the parallel kernels and the benchmark runner; values
// below 1 restore the OpenMP default.
void set_num_threads(int threads);
int max_threads();

}  // namespace omatch::kernels
