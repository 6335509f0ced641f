#pragma once

// Global stochastic Galerkin operator.
//
// Block (k, j) of the global matrix is K^(j,k) = sum_i c_ijk K_i. Every K_i
// shares one sparsity pattern, so each nonzero block is stored as a single
// value array over that pattern and applied with one sparse matvec. The
// global matrix itself is never formed.
//
// The hierarchy splits the block index range at dims[l] = C(N+l, N):
//   A_l = [ A_{l-1}  B_l ]    head(l) = [0, dims[l-1])
//         [ C_l      D_l ]    tail(l) = [dims[l-1], dims[l])

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "sgfem/gpc_basis.hpp"
#include "sgfem/sparse_matrix.hpp"

namespace sgfem {

struct BlockRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  bool contains(std::size_t b) const { return b >= begin && b < end; }
};

enum class Part { A, B, C, D };

class GalerkinOperator {
 public:
  /// stiffness[i] pairs with coefficient index i of the tensor; level_dims
  /// as returned by hierarchy_dims.
  GalerkinOperator(std::vector<CsrMatrix> stiffness, TripleProductTensor tensor,
                   std::vector<std::size_t> level_dims);

  std::size_t spatial_dim() const { return n_; }
  std::size_t block_count() const { return tensor_.size(); }
  std::size_t dim() const { return n_ * tensor_.size(); }
  int levels() const { return static_cast<int>(dims_.size()) - 1; }
  const std::vector<std::size_t>& level_dims() const { return dims_; }

  BlockRange head(int level) const;
  BlockRange tail(int level) const;
  BlockRange leading(int level) const { return {0, dims_.at(static_cast<std::size_t>(level))}; }
  BlockRange rows_of(int level, Part part) const;
  BlockRange cols_of(int level, Part part) const;

  const TripleProductTensor& tensor() const { return tensor_; }
  const std::vector<CsrMatrix>& stiffness() const { return K_; }
  const CsrPattern& pattern() const { return K_.front().pattern(); }

  /// Combined values of the block in global row k, column j; empty if zero.
  std::span<const double> block(std::size_t k, std::size_t j) const;
  bool has_block(std::size_t k, std::size_t j) const { return tensor_.nonzero(j, k); }

  /// True when block (k, k) is c_0kk K_0 alone.
  bool diagonal_is_mean_multiple(std::size_t k) const;
  double mean_scale(std::size_t k) const { return tensor_.value(0, k, k); }
  /// True when D_l has no nonzero off-diagonal blocks.
  bool level_block_diagonal(int level) const;

  /// y = A x over the full block range.
  void apply(std::span<const double> x, std::span<double> y) const;

  /// y (+)= alpha * A[rows, cols] x. x and y are local to their ranges
  /// (cols.size() and rows.size() spatial blocks). Returns the number of
  /// block matvecs performed.
  std::size_t apply_range(BlockRange rows, BlockRange cols, std::span<const double> x,
                          std::span<double> y, double alpha = 1.0, bool accumulate = false) const;

  std::size_t apply_part(int level, Part part, std::span<const double> x, std::span<double> y,
                         double alpha = 1.0, bool accumulate = false) const;

  /// Number of nonzero blocks inside the (rows, cols) window.
  std::size_t count_blocks(BlockRange rows, BlockRange cols) const;

  /// Explicit assembly of a block window (direct level solves, diagnostics).
  Eigen::SparseMatrix<double> assemble(BlockRange rows, BlockRange cols) const;
  /// Dense global matrix; refuses above max_dim.
  Eigen::MatrixXd dense(std::size_t max_dim = 4000) const;

 private:
  struct RowEntry {
    std::size_t col;
    std::size_t id;
  };
  std::vector<CsrMatrix> K_;
  TripleProductTensor tensor_;
  std::vector<std::size_t> dims_;
  std::size_t n_ = 0;
  std::vector<std::vector<double>> values_;    // per tensor block id
  std::vector<std::vector<RowEntry>> rows_;    // per global block row, sorted by col
};

}  // namespace sgfem
