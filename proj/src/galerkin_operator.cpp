#include "sgfem/galerkin_operator.hpp"

#include <algorithm>
#include <stdexcept>

namespace sgfem {

GalerkinOperator::GalerkinOperator(std::vector<CsrMatrix> stiffness, TripleProductTensor tensor,
                                   std::vector<std::size_t> level_dims)
    : K_(std::move(stiffness)), tensor_(std::move(tensor)), dims_(std::move(level_dims)) {
  if (K_.empty()) throw std::invalid_argument("GalerkinOperator: no stiffness matrices");
  if (K_.size() < tensor_.coeff_size())
    throw std::invalid_argument("GalerkinOperator: fewer stiffness matrices than coefficients");
  if (dims_.empty() || dims_.back() != tensor_.size() || dims_.front() != 1)
    throw std::invalid_argument("GalerkinOperator: hierarchy does not match the basis");
  n_ = static_cast<std::size_t>(K_.front().rows());
  const auto& pat = K_.front().shared_pattern();
  for (const auto& K : K_)
    if (K.shared_pattern() != pat && K.pattern().cols != pat->cols)
      throw std::invalid_argument("GalerkinOperator: stiffness matrices must share a pattern");

  const std::size_t nnz = pat->nnz();
  values_.resize(tensor_.blocks().size());
  rows_.resize(tensor_.size());
  for (std::size_t id = 0; id < tensor_.blocks().size(); ++id) {
    const auto& blk = tensor_.blocks()[id];
    auto& v = values_[id];
    v.assign(nnz, 0.0);
    for (const auto& t : blk.terms) {
      const auto src = K_[static_cast<std::size_t>(t.i)].values();
      for (std::size_t e = 0; e < nnz; ++e) v[e] += t.c * src[e];
    }
    // Global row k, column j holds K^(j,k).
    rows_[static_cast<std::size_t>(blk.k)].push_back({static_cast<std::size_t>(blk.j), id});
  }
  for (auto& r : rows_)
    std::sort(r.begin(), r.end(), [](const RowEntry& a, const RowEntry& b) { return a.col < b.col; });
}

BlockRange GalerkinOperator::head(int level) const {
  if (level < 0 || level > levels()) throw std::out_of_range("GalerkinOperator: invalid level");
  return level == 0 ? BlockRange{0, 0} : BlockRange{0, dims_[level - 1]};
}

BlockRange GalerkinOperator::tail(int level) const {
  if (level < 0 || level > levels()) throw std::out_of_range("GalerkinOperator: invalid level");
  return level == 0 ? BlockRange{0, dims_[0]} : BlockRange{dims_[level - 1], dims_[level]};
}

BlockRange GalerkinOperator::rows_of(int level, Part part) const {
  return (part == Part::A || part == Part::B) ? head(level) : tail(level);
}

BlockRange GalerkinOperator::cols_of(int level, Part part) const {
  return (part == Part::A || part == Part::C) ? head(level) : tail(level);
}

std::span<const double> GalerkinOperator::block(std::size_t k, std::size_t j) const {
  const int id = tensor_.block_id(j, k);
  if (id < 0) return {};
  return values_[static_cast<std::size_t>(id)];
}

bool GalerkinOperator::diagonal_is_mean_multiple(std::size_t k) const {
  const int id = tensor_.block_id(k, k);
  if (id < 0) return false;
  const auto& terms = tensor_.blocks()[static_cast<std::size_t>(id)].terms;
  return terms.size() == 1 && terms.front().i == 0;
}

bool GalerkinOperator::level_block_diagonal(int level) const {
  const BlockRange t = tail(level);
  for (std::size_t k = t.begin; k < t.end; ++k)
    for (const auto& e : rows_[k])
      if (e.col != k && t.contains(e.col)) return false;
  return true;
}

void GalerkinOperator::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != dim() || y.size() != dim())
    throw std::invalid_argument("GalerkinOperator::apply: dimension mismatch");
  const BlockRange all{0, block_count()};
  apply_range(all, all, x, y);
}

std::size_t GalerkinOperator::apply_range(BlockRange rows, BlockRange cols,
                                          std::span<const double> x, std::span<double> y,
                                          double alpha, bool accumulate) const {
  if (x.size() != cols.size() * n_ || y.size() != rows.size() * n_)
    throw std::invalid_argument("GalerkinOperator::apply_range: dimension mismatch");
  if (!accumulate) std::fill(y.begin(), y.end(), 0.0);
  const auto view = pattern().view();
  const auto& kern = simd::active();
  std::size_t count = 0;
  for (std::size_t k = rows.begin; k < rows.end; ++k) {
    double* yk = y.data() + (k - rows.begin) * n_;
    const auto& row = rows_[k];
    auto it = std::lower_bound(row.begin(), row.end(), cols.begin,
                               [](const RowEntry& e, std::size_t c) { return e.col < c; });
    for (; it != row.end() && it->col < cols.end; ++it) {
      kern.csr_gemv(view, values_[it->id].data(), alpha, x.data() + (it->col - cols.begin) * n_, yk);
      ++count;
    }
  }
  return count;
}

std::size_t GalerkinOperator::apply_part(int level, Part part, std::span<const double> x,
                                         std::span<double> y, double alpha, bool accumulate) const {
  return apply_range(rows_of(level, part), cols_of(level, part), x, y, alpha, accumulate);
}

std::size_t GalerkinOperator::count_blocks(BlockRange rows, BlockRange cols) const {
  std::size_t count = 0;
  for (std::size_t k = rows.begin; k < rows.end; ++k)
    for (const auto& e : rows_[k])
      if (cols.contains(e.col)) ++count;
  return count;
}

Eigen::SparseMatrix<double> GalerkinOperator::assemble(BlockRange rows, BlockRange cols) const {
  const auto& p = pattern();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(count_blocks(rows, cols) * p.nnz());
  for (std::size_t k = rows.begin; k < rows.end; ++k)
    for (const auto& e : rows_[k]) {
      if (!cols.contains(e.col)) continue;
      const auto& v = values_[e.id];
      const std::size_t r0 = (k - rows.begin) * n_, c0 = (e.col - cols.begin) * n_;
      for (std::int32_t r = 0; r < p.rows; ++r)
        for (std::int32_t q = p.row_ptr[r]; q < p.row_ptr[r + 1]; ++q)
          if (v[q] != 0.0)
            trip.emplace_back(static_cast<int>(r0 + r), static_cast<int>(c0 + p.cols[q]), v[q]);
    }
  Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(rows.size() * n_),
                                static_cast<Eigen::Index>(cols.size() * n_));
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

Eigen::MatrixXd GalerkinOperator::dense(std::size_t max_dim) const {
  if (dim() > max_dim) throw std::length_error("GalerkinOperator::dense: size guard exceeded");
  const BlockRange all{0, block_count()};
  return Eigen::MatrixXd(assemble(all, all));
}

}  // namespace sgfem
