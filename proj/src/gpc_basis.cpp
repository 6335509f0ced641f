#include "sgfem/gpc_basis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace sgfem {

const char* to_string(Family f) { return f == Family::Legendre ? "legendre" : "hermite"; }

MultiIndexSet::MultiIndexSet(int N, int P, std::vector<int> flat, std::vector<std::size_t> offsets)
    : N_(N), P_(P), flat_(std::move(flat)), offsets_(std::move(offsets)) {}

int MultiIndexSet::degree(std::size_t pos) const {
  auto idx = (*this)[pos];
  return std::accumulate(idx.begin(), idx.end(), 0);
}

std::size_t basis_size(int N, int P) {
  if (N < 1 || P < 0) throw std::invalid_argument("basis_size: need N >= 1 and P >= 0");
  // C(N+P, P) built incrementally; each partial product is itself a binomial.
  unsigned long long r = 1;
  for (int m = 1; m <= P; ++m) {
    const unsigned long long num = static_cast<unsigned long long>(N + m);
    if (r > std::numeric_limits<unsigned long long>::max() / num)
      throw std::overflow_error("basis_size: index count overflows");
    r = r * num / static_cast<unsigned long long>(m);
  }
  if (r > static_cast<unsigned long long>(std::numeric_limits<int>::max()))
    throw std::overflow_error("basis_size: index count exceeds the index range");
  return static_cast<std::size_t>(r);
}

std::vector<std::size_t> hierarchy_dims(int N, int P) {
  std::vector<std::size_t> dims;
  for (int l = 0; l <= P; ++l) dims.push_back(basis_size(N, l));
  return dims;
}

namespace {

// Append all N-tuples of total degree `remaining` in descending lex order.
void enumerate_degree(int N, int pos, int remaining, std::vector<int>& current,
                      std::vector<int>& out) {
  if (pos == N - 1) {
    current[pos] = remaining;
    out.insert(out.end(), current.begin(), current.end());
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    current[pos] = v;
    enumerate_degree(N, pos + 1, remaining - v, current, out);
  }
}

}  // namespace

MultiIndexSet build_multi_index_set(int N, int P) {
  const std::size_t total = basis_size(N, P);
  std::vector<int> flat;
  flat.reserve(total * static_cast<std::size_t>(N));
  std::vector<std::size_t> offsets;
  std::vector<int> current(static_cast<std::size_t>(N), 0);
  for (int d = 0; d <= P; ++d) {
    offsets.push_back(flat.size() / static_cast<std::size_t>(N));
    enumerate_degree(N, 0, d, current, flat);
  }
  offsets.push_back(total);
  return MultiIndexSet(N, P, std::move(flat), std::move(offsets));
}

double eval_orthonormal(Family f, int n, double x) {
  if (n < 0) throw std::invalid_argument("eval_orthonormal: negative degree");
  if (f == Family::Legendre) {
    double p0 = 1.0, p1 = x;
    if (n == 0) return 1.0;
    for (int m = 1; m < n; ++m) {
      const double p2 = ((2.0 * m + 1.0) * x * p1 - m * p0) / (m + 1.0);
      p0 = p1;
      p1 = p2;
    }
    return std::sqrt(2.0 * n + 1.0) * p1;
  }
  double h0 = 1.0, h1 = x;
  if (n == 0) return 1.0;
  for (int m = 1; m < n; ++m) {
    const double h2 = (x * h1 - std::sqrt(static_cast<double>(m)) * h0) / std::sqrt(m + 1.0);
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

double triple_product_1d(Family f, int a, int b, int c) {
  if (a < 0 || b < 0 || c < 0) throw std::invalid_argument("triple_product_1d: negative degree");
  if ((a + b + c) % 2 != 0) return 0.0;
  const int s = (a + b + c) / 2;
  if (s < a || s < b || s < c) return 0.0;
  auto lf = [](int n) { return std::lgamma(static_cast<long double>(n) + 1.0L); };
  long double log_value;
  if (f == Family::Legendre) {
    // Square of the Wigner 3j symbol (a b c; 0 0 0), scaled to orthonormal.
    log_value = lf(2 * s - 2 * a) + lf(2 * s - 2 * b) + lf(2 * s - 2 * c) - lf(2 * s + 1) +
                2.0L * (lf(s) - lf(s - a) - lf(s - b) - lf(s - c));
    log_value += 0.5L * std::log(static_cast<long double>((2 * a + 1)) * (2 * b + 1) * (2 * c + 1));
  } else {
    log_value = 0.5L * (lf(a) + lf(b) + lf(c)) - lf(s - a) - lf(s - b) - lf(s - c);
  }
  return static_cast<double>(std::exp(log_value));
}

std::pair<std::vector<double>, std::vector<double>> gauss_rule(Family f, int n) {
  if (n < 1) throw std::invalid_argument("gauss_rule: need n >= 1");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int m = 1; m < n; ++m) {
    const double b = f == Family::Legendre ? m / std::sqrt(4.0 * m * m - 1.0)
                                           : std::sqrt(static_cast<double>(m));
    J(m, m - 1) = J(m - 1, m) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  std::vector<double> x(n), w(n);
  for (int m = 0; m < n; ++m) {
    x[m] = es.eigenvalues()(m);
    w[m] = es.eigenvectors()(0, m) * es.eigenvectors()(0, m);
  }
  return {x, w};
}

TripleProductTensor::TripleProductTensor(std::size_t size, std::size_t coeff_size,
                                         std::vector<Block> blocks)
    : size_(size), coeff_size_(coeff_size), blocks_(std::move(blocks)), lookup_(size * size, -1) {
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    lookup_[static_cast<std::size_t>(blocks_[b].j) * size_ + static_cast<std::size_t>(blocks_[b].k)] =
        static_cast<int>(b);
}

double TripleProductTensor::block_weight(std::size_t j, std::size_t k) const {
  const int id = block_id(j, k);
  if (id < 0) return 0.0;
  double s = 0.0;
  for (const auto& t : blocks_[id].terms) s += t.c;
  return s;
}

double TripleProductTensor::value(std::size_t i, std::size_t j, std::size_t k) const {
  const int id = block_id(j, k);
  if (id < 0) return 0.0;
  for (const auto& t : blocks_[id].terms)
    if (static_cast<std::size_t>(t.i) == i) return t.c;
  return 0.0;
}

std::size_t TripleProductTensor::entry_count() const {
  std::size_t n = 0;
  for (const auto& b : blocks_) n += b.terms.size();
  return n;
}

void TripleProductTensor::write_entries(std::ostream& os) const {
  os << std::setprecision(17);
  for (const auto& b : blocks_)
    for (const auto& t : b.terms) os << t.i << ' ' << b.j << ' ' << b.k << ' ' << t.c << '\n';
}

void TripleProductTensor::write_block_pattern(std::ostream& os) const {
  for (std::size_t j = 0; j < size_; ++j) {
    for (std::size_t k = 0; k < size_; ++k) os << (k ? "," : "") << (nonzero(j, k) ? 1 : 0);
    os << '\n';
  }
}

TripleProductTensor build_triple_product_tensor(const MultiIndexSet& basis,
                                                const MultiIndexSet& coeff_basis, Family family) {
  if (basis.dimensions() != coeff_basis.dimensions())
    throw std::invalid_argument("build_triple_product_tensor: dimension mismatch");
  const int N = basis.dimensions();
  const int D = std::max(basis.max_degree(), coeff_basis.max_degree()) + 1;

  std::vector<double> t1(static_cast<std::size_t>(D * D * D));
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b)
      for (int c = 0; c < D; ++c) t1[(a * D + b) * D + c] = triple_product_1d(family, a, b, c);

  const std::size_t M = basis.size();
  const std::size_t L = coeff_basis.size();
  std::vector<TripleProductTensor::Block> blocks;
  double cmax = 0.0;
  for (std::size_t j = 0; j < M; ++j) {
    const auto jj = basis[j];
    for (std::size_t k = 0; k < M; ++k) {
      const auto kk = basis[k];
      TripleProductTensor::Block blk{static_cast<int>(j), static_cast<int>(k), {}};
      for (std::size_t i = 0; i < L; ++i) {
        const auto ii = coeff_basis[i];
        double c = 1.0;
        for (int d = 0; d < N && c != 0.0; ++d) c *= t1[(ii[d] * D + jj[d]) * D + kk[d]];
        if (c != 0.0) {
          blk.terms.push_back({static_cast<int>(i), c});
          cmax = std::max(cmax, std::abs(c));
        }
      }
      if (!blk.terms.empty()) blocks.push_back(std::move(blk));
    }
  }

  const double cut = 1e-12 * cmax;
  std::vector<TripleProductTensor::Block> kept;
  for (auto& b : blocks) {
    std::erase_if(b.terms, [cut](const auto& t) { return std::abs(t.c) < cut; });
    if (!b.terms.empty()) kept.push_back(std::move(b));
  }
  return TripleProductTensor(M, L, std::move(kept));
}

TripleProductTensor build_kl_tensor(const MultiIndexSet& basis, Family family) {
  return build_triple_product_tensor(basis, build_multi_index_set(basis.dimensions(), 1), family);
}

}  // namespace sgfem
