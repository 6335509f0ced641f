#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "sgfem/simd/kernels.hpp"

namespace sgfem {

/// CSR sparsity pattern. Column indices are sorted within each row.
struct CsrPattern {
  std::int32_t rows = 0;
  std::vector<std::int32_t> row_ptr;
  std::vector<std::int32_t> cols;

  std::size_t nnz() const { return cols.size(); }
  simd::CsrView view() const { return {static_cast<std::size_t>(rows), row_ptr.data(), cols.data()}; }
  /// Position of (r, c) in the value array, or -1.
  std::int32_t find(std::int32_t r, std::int32_t c) const;
};

/// Square sparse matrix: a shared pattern plus its own values.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  explicit CsrMatrix(std::shared_ptr<const CsrPattern> pattern);
  CsrMatrix(std::shared_ptr<const CsrPattern> pattern, std::vector<double> values);

  std::int32_t rows() const { return pattern_ ? pattern_->rows : 0; }
  const CsrPattern& pattern() const { return *pattern_; }
  const std::shared_ptr<const CsrPattern>& shared_pattern() const { return pattern_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double at(std::int32_t r, std::int32_t c) const;

  /// y += alpha * A x
  void multiply_add(std::span<const double> x, std::span<double> y, double alpha = 1.0) const;
  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;

  /// max |A - A^T| over stored entries.
  double asymmetry() const;

  Eigen::SparseMatrix<double> to_eigen() const;
  Eigen::MatrixXd to_dense() const;

  /// Coordinate text, one `row col value` line per stored entry (zero-based).
  void write_coordinate(std::ostream& os) const;

 private:
  std::shared_ptr<const CsrPattern> pattern_;
  std::vector<double> values_;
};

}  // namespace sgfem
