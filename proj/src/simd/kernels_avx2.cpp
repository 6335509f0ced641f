// Compiled with -mavx2 -mfma. Only reached through the dispatch table after
// the CPU has been checked, so nothing here may run at static-init time.

#include <immintrin.h>

#include "sgfem/simd/kernels.hpp"

namespace sgfem::simd {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void xpay_avx2(const double* x, double a, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] = x[i] + a * y[i];
}

// Rows of the Q1 stencil have at most 9 entries, so one gather of 4 plus a
// short scalar tail covers most of each row.
void csr_gemv_avx2(const CsrView& p, const double* values, double alpha, const double* x,
                   double* y) {
  for (std::size_t r = 0; r < p.rows; ++r) {
    std::int32_t k = p.row_ptr[r];
    const std::int32_t end = p.row_ptr[r + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 4 <= end; k += 4) {
      const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(p.cols + k));
      const __m256d xv = _mm256_i32gather_pd(x, idx, 8);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(values + k), xv, acc);
    }
    double s = hsum(acc);
    for (; k < end; ++k) s += values[k] * x[p.cols[k]];
    y[r] += alpha * s;
  }
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{Isa::Avx2, "avx2", dot_avx2, axpy_avx2, xpay_avx2,
                                 csr_gemv_avx2};
  return &table;
}

}  // namespace sgfem::simd
