#include "rankbandit/kernels.hpp"

#include <algorithm>
#include <limits>

namespace rankbandit::simd {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void gemv_scalar(const double* a, std::size_t rows, std::size_t cols,
                 const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_scalar(a + r * cols, x, cols);
}

void sym_rank_one_scalar(double* a, std::size_t n, double alpha,
                         const double* u) {
  for (std::size_t i = 0; i < n; ++i) {
    const double s = alpha * u[i];
    double* row = a + i * n;
    for (std::size_t j = i; j < n; ++j) row[j] += s * u[j];
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) a[i * n + j] = a[j * n + i];
}

double max_plus_scalar(const double* a, const double* b, std::size_t n) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) best = std::max(best, a[i] + b[i]);
  return best;
}

void affine_row_scalar(double* out, double c, double s, const double* b,
                       std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = c + s * b[i];
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::scalar,        dot_scalar,
                                 axpy_scalar,        gemv_scalar,
                                 sym_rank_one_scalar, max_plus_scalar,
                                 affine_row_scalar};
  return table;
}

}  // namespace rankbandit::simd
