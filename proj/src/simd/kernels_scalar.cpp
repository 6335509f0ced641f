#include "sgfem/simd/kernels.hpp"

namespace sgfem::simd {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpay_scalar(const double* x, double a, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + a * y[i];
}

void csr_gemv_scalar(const CsrView& p, const double* values, double alpha, const double* x,
                     double* y) {
  for (std::size_t r = 0; r < p.rows; ++r) {
    double s = 0.0;
    for (std::int32_t k = p.row_ptr[r]; k < p.row_ptr[r + 1]; ++k) s += values[k] * x[p.cols[k]];
    y[r] += alpha * s;
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::Scalar, "scalar", dot_scalar, axpy_scalar, xpay_scalar,
                                 csr_gemv_scalar};
  return table;
}

}  // namespace sgfem::simd
