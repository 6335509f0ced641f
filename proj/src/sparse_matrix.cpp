#include "sgfem/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace sgfem {

std::int32_t CsrPattern::find(std::int32_t r, std::int32_t c) const {
  auto first = cols.begin() + row_ptr[r];
  auto last = cols.begin() + row_ptr[r + 1];
  auto it = std::lower_bound(first, last, c);
  if (it == last || *it != c) return -1;
  return static_cast<std::int32_t>(it - cols.begin());
}

CsrMatrix::CsrMatrix(std::shared_ptr<const CsrPattern> pattern)
    : pattern_(std::move(pattern)), values_(pattern_->nnz(), 0.0) {}

CsrMatrix::CsrMatrix(std::shared_ptr<const CsrPattern> pattern, std::vector<double> values)
    : pattern_(std::move(pattern)), values_(std::move(values)) {
  if (values_.size() != pattern_->nnz())
    throw std::invalid_argument("CsrMatrix: value count does not match pattern");
}

double CsrMatrix::at(std::int32_t r, std::int32_t c) const {
  const std::int32_t pos = pattern_->find(r, c);
  return pos < 0 ? 0.0 : values_[pos];
}

void CsrMatrix::multiply_add(std::span<const double> x, std::span<double> y, double alpha) const {
  simd::active().csr_gemv(pattern_->view(), values_.data(), alpha, x.data(), y.data());
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  multiply_add(x, y, 1.0);
}

double CsrMatrix::asymmetry() const {
  double worst = 0.0;
  const auto& p = *pattern_;
  for (std::int32_t r = 0; r < p.rows; ++r)
    for (std::int32_t k = p.row_ptr[r]; k < p.row_ptr[r + 1]; ++k)
      worst = std::max(worst, std::abs(values_[k] - at(p.cols[k], r)));
  return worst;
}

Eigen::SparseMatrix<double> CsrMatrix::to_eigen() const {
  const auto& p = *pattern_;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(p.nnz());
  for (std::int32_t r = 0; r < p.rows; ++r)
    for (std::int32_t k = p.row_ptr[r]; k < p.row_ptr[r + 1]; ++k)
      if (values_[k] != 0.0) trip.emplace_back(r, p.cols[k], values_[k]);
  Eigen::SparseMatrix<double> m(p.rows, p.rows);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

Eigen::MatrixXd CsrMatrix::to_dense() const {
  const auto& p = *pattern_;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p.rows, p.rows);
  for (std::int32_t r = 0; r < p.rows; ++r)
    for (std::int32_t k = p.row_ptr[r]; k < p.row_ptr[r + 1]; ++k) m(r, p.cols[k]) = values_[k];
  return m;
}

void CsrMatrix::write_coordinate(std::ostream& os) const {
  const auto& p = *pattern_;
  os << std::setprecision(17);
  for (std::int32_t r = 0; r < p.rows; ++r)
    for (std::int32_t k = p.row_ptr[r]; k < p.row_ptr[r + 1]; ++k)
      if (values_[k] != 0.0) os << r << ' ' << p.cols[k] << ' ' << values_[k] << '\n';
}

}  // namespace sgfem
