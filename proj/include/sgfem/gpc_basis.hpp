#pragma once

// Multivariate orthonormal polynomial chaos basis.
//
// Multi-indices are graded by total degree; within one degree they follow
// descending lexicographic order, so the first-order indices come out as
// e_1, e_2, ..., e_N. This order is frozen: block layouts, tables and the
// hierarchy all depend on it.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace sgfem {

enum class Family {
  Legendre,  // uniform measure on [-1, 1]
  Hermite,   // standard Gaussian measure
};

const char* to_string(Family f);

class MultiIndexSet {
 public:
  MultiIndexSet() = default;
  MultiIndexSet(int N, int P, std::vector<int> flat, std::vector<std::size_t> degree_offsets);

  int dimensions() const { return N_; }
  int max_degree() const { return P_; }
  std::size_t size() const { return flat_.size() / static_cast<std::size_t>(N_); }

  std::span<const int> operator[](std::size_t pos) const {
    return {flat_.data() + pos * static_cast<std::size_t>(N_), static_cast<std::size_t>(N_)};
  }
  int degree(std::size_t pos) const;

  /// degree_offsets()[l] = first position with total degree l; one extra
  /// trailing entry equal to size().
  const std::vector<std::size_t>& degree_offsets() const { return offsets_; }

  bool operator==(const MultiIndexSet& other) const = default;

 private:
  int N_ = 0;
  int P_ = 0;
  std::vector<int> flat_;
  std::vector<std::size_t> offsets_;
};

/// Throws std::invalid_argument for N < 1, P < 0 or an index count that
/// does not fit in the platform's index range.
MultiIndexSet build_multi_index_set(int N, int P);

/// (N+P)! / (N! P!), throwing std::overflow_error if it does not fit.
std::size_t basis_size(int N, int P);

/// Sizes of the nested leading blocks for l = 0..P: (N+l)! / (N! l!).
std::vector<std::size_t> hierarchy_dims(int N, int P);

/// Orthonormal univariate polynomial psi_n(x) of the family.
double eval_orthonormal(Family f, int n, double x);

/// E[psi_a psi_b psi_c] under the family's probability measure (closed form).
double triple_product_1d(Family f, int a, int b, int c);

/// Gauss rule for the family's probability measure: nodes and weights
/// summing to one, exact for polynomials of degree 2n-1.
std::pair<std::vector<double>, std::vector<double>> gauss_rule(Family f, int n);

/// Sparse c_ijk = E[psi_i psi_j psi_k] where i runs over a coefficient basis
/// and j, k over the solution basis, grouped by (j, k) block.
class TripleProductTensor {
 public:
  struct Term {
    int i;
    double c;
  };
  struct Block {
    int j;
    int k;
    std::vector<Term> terms;  // sorted by i
  };

  TripleProductTensor() = default;
  TripleProductTensor(std::size_t size, std::size_t coeff_size, std::vector<Block> blocks);

  std::size_t size() const { return size_; }
  std::size_t coeff_size() const { return coeff_size_; }

  /// Nonzero blocks in row-major (j, k) order.
  const std::vector<Block>& blocks() const { return blocks_; }
  /// Index into blocks() or -1 if the (j, k) block is structurally zero.
  int block_id(std::size_t j, std::size_t k) const { return lookup_[j * size_ + k]; }
  bool nonzero(std::size_t j, std::size_t k) const { return block_id(j, k) >= 0; }

  /// c^(j,k) = sum_i c_ijk.
  double block_weight(std::size_t j, std::size_t k) const;
  double value(std::size_t i, std::size_t j, std::size_t k) const;

  std::size_t nonzero_blocks() const { return blocks_.size(); }
  std::size_t entry_count() const;

  /// One `i j k value` line per stored entry.
  void write_entries(std::ostream& os) const;
  /// Dense 0/1 CSV of the block pattern.
  void write_block_pattern(std::ostream& os) const;

 private:
  std::size_t size_ = 0;
  std::size_t coeff_size_ = 0;
  std::vector<Block> blocks_;
  std::vector<int> lookup_;
};

/// Entries below 1e-12 * max|c| are treated as structural zeros.
TripleProductTensor build_triple_product_tensor(const MultiIndexSet& basis,
                                                const MultiIndexSet& coeff_basis, Family family);

/// Linear (KL) coefficient basis: the constant plus the N first-order indices.
TripleProductTensor build_kl_tensor(const MultiIndexSet& basis, Family family);

}  // namespace sgfem
