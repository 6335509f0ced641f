#pragma once

// Inner-loop kernels used by the Krylov solvers and the block operator.
//
// Every kernel has a scalar reference implementation. Vectorized variants
// (currently AVX2+FMA on x86-64) are compiled into separate translation units
// and selected once at startup from the CPU feature flags. The environment
// variable SGFEM_SIMD=scalar|avx2|auto overrides the choice.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace sgfem::simd {

enum class Isa { Scalar, Avx2 };

/// Borrowed view of a CSR sparsity pattern.
struct CsrView {
  std::size_t rows = 0;
  const std::int32_t* row_ptr = nullptr;
  const std::int32_t* cols = nullptr;
};

struct KernelTable {
  Isa isa;
  std::string_view name;
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y = x + a * y
  void (*xpay)(const double* x, double a, double* y, std::size_t n);
  // y += alpha * A x, A given by (pattern, values)
  void (*csr_gemv)(const CsrView& pattern, const double* values, double alpha, const double* x,
                   double* y);
};

const KernelTable& scalar_kernels();

/// Returns nullptr when the variant was not compiled in.
const KernelTable* avx2_kernels();

bool cpu_supports(Isa isa);

/// The table used by the wrappers below.
const KernelTable& active();

/// Force a variant (tests, benchmarking). Throws std::invalid_argument if the
/// variant is unavailable on this machine.
void select(Isa isa);

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}

inline double norm2_squared(std::span<const double> x) { return dot(x, x); }

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}

inline void xpay(std::span<const double> x, double a, std::span<double> y) {
  active().xpay(x.data(), a, y.data(), x.size());
}

}  // namespace sgfem::simd
