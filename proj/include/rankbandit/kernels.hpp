#pragma once

// Data-parallel inner loops shared by the estimators and the graph solver.
//
// Every kernel has a scalar reference implementation. On x86-64 an AVX2
// variant is compiled separately and chosen at runtime when the CPU supports
// it. Setting RANKBANDIT_ISA=scalar in the environment forces the reference
// path.
//
// Kernels that feed the longest-path solver (max_plus, affine_row) use only
// exactly rounded operations (add, mul, max), so both variants return
// bit-identical results. The reductions (dot, gemv) reassociate sums and
// agree with the reference to rounding error only.

#include <cstddef>
#include <string_view>

namespace rankbandit::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;

  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);

  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);

  // y = A x for row-major A (rows x cols)
  void (*gemv)(const double* a, std::size_t rows, std::size_t cols,
               const double* x, double* y);

  // A += alpha * u u^T on the upper triangle of a row-major n x n matrix;
  // the lower triangle is then mirrored so A stays exactly symmetric.
  void (*sym_rank_one)(double* a, std::size_t n, double alpha,
                       const double* u);

  // max_i (a[i] + b[i]); -inf for n == 0
  double (*max_plus)(const double* a, const double* b, std::size_t n);

  // out[i] = c + s * b[i]
  void (*affine_row)(double* out, double c, double s, const double* b,
                     std::size_t n);
};

const KernelTable& scalar_kernels();

// AVX2 table when compiled in and supported by the running CPU, else null.
const KernelTable* avx2_kernels();

// Active table. First call resolves the ISA from the CPU and the
// RANKBANDIT_ISA override; set_isa() replaces it (tests use this).
const KernelTable& kernels();
bool isa_available(Isa isa);
void set_isa(Isa isa);
Isa active_isa();
std::string_view isa_name(Isa isa);

}  // namespace rankbandit::simd
