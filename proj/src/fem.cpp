#include "sgfem/fem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace sgfem {

Mesh build_mesh(double h) {
  if (!(h > 0.0)) throw std::invalid_argument("build_mesh: h must be positive");
  const double inv = 1.0 / h;
  const long n = std::lround(inv);
  if (n < 1 || std::abs(inv - static_cast<double>(n)) > 1e-9 * inv)
    throw std::invalid_argument("build_mesh: 1/h must be a positive integer");
  Mesh m;
  m.cells = static_cast<int>(n);
  m.h = 1.0 / static_cast<double>(n);
  const int s = m.cells + 1;
  m.x.resize(static_cast<std::size_t>(s * s));
  m.y.resize(m.x.size());
  m.boundary.resize(m.x.size());
  for (int j = 0; j < s; ++j)
    for (int i = 0; i < s; ++i) {
      const int k = m.node(i, j);
      m.x[k] = i * m.h;
      m.y[k] = j * m.h;
      m.boundary[k] = (i == 0 || j == 0 || i == m.cells || j == m.cells) ? 1 : 0;
    }
  return m;
}

std::shared_ptr<const CsrPattern> q1_pattern(const Mesh& mesh) {
  auto p = std::make_shared<CsrPattern>();
  const int s = mesh.nodes_per_side();
  p->rows = s * s;
  p->row_ptr.reserve(static_cast<std::size_t>(p->rows) + 1);
  p->row_ptr.push_back(0);
  for (int j = 0; j < s; ++j)
    for (int i = 0; i < s; ++i) {
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          const int ii = i + di, jj = j + dj;
          if (ii >= 0 && jj >= 0 && ii < s && jj < s) p->cols.push_back(mesh.node(ii, jj));
        }
      p->row_ptr.push_back(static_cast<std::int32_t>(p->cols.size()));
    }
  return p;
}

namespace {

// Local node order: (0,0), (1,0), (0,1), (1,1) in reference coordinates.
constexpr std::array<int, 4> kLx{0, 1, 0, 1};
constexpr std::array<int, 4> kLy{0, 0, 1, 1};

double shape(int a, double s, double t) {
  return (kLx[a] ? s : 1.0 - s) * (kLy[a] ? t : 1.0 - t);
}
double shape_ds(int a, double t) { return (kLx[a] ? 1.0 : -1.0) * (kLy[a] ? t : 1.0 - t); }
double shape_dt(int a, double s) { return (kLx[a] ? s : 1.0 - s) * (kLy[a] ? 1.0 : -1.0); }

const std::array<double, 2>& gauss_points() {
  static const std::array<double, 2> g{0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};
  return g;
}

std::array<int, 4> cell_nodes(const Mesh& mesh, int ci, int cj) {
  std::array<int, 4> n{};
  for (int a = 0; a < 4; ++a) n[a] = mesh.node(ci + kLx[a], cj + kLy[a]);
  return n;
}

}  // namespace

CsrMatrix assemble_weighted_stiffness(const Mesh& mesh,
                                      const std::shared_ptr<const CsrPattern>& pattern,
                                      std::span<const double> field, BoundaryRows bc) {
  if (field.size() != static_cast<std::size_t>(mesh.node_count()))
    throw std::invalid_argument("assemble_weighted_stiffness: field length mismatch");
  CsrMatrix K(pattern);
  auto vals = K.values();
  const auto& g = gauss_points();
  for (int cj = 0; cj < mesh.cells; ++cj)
    for (int ci = 0; ci < mesh.cells; ++ci) {
      const auto nodes = cell_nodes(mesh, ci, cj);
      double ke[4][4] = {};
      for (double s : g)
        for (double t : g) {
          double k = 0.0;
          for (int a = 0; a < 4; ++a) k += field[nodes[a]] * shape(a, s, t);
          // Reference-to-physical scaling cancels in 2D: (1/h^2) * h^2.
          const double wk = 0.25 * k;
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
              ke[a][b] += wk * (shape_ds(a, t) * shape_ds(b, t) + shape_dt(a, s) * shape_dt(b, s));
        }
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) vals[pattern->find(nodes[a], nodes[b])] += ke[a][b];
    }

  if (bc != BoundaryRows::Keep) {
    const auto& p = *pattern;
    for (std::int32_t r = 0; r < p.rows; ++r)
      for (std::int32_t k = p.row_ptr[r]; k < p.row_ptr[r + 1]; ++k) {
        const std::int32_t c = p.cols[k];
        if (mesh.boundary[r] || mesh.boundary[c])
          vals[k] = (bc == BoundaryRows::Identity && r == c) ? 1.0 : 0.0;
      }
  }
  return K;
}

std::vector<double> assemble_load(const Mesh& mesh, const std::function<double(double, double)>& f) {
  std::vector<double> b(static_cast<std::size_t>(mesh.node_count()), 0.0);
  const auto& g = gauss_points();
  const double area = mesh.h * mesh.h;
  for (int cj = 0; cj < mesh.cells; ++cj)
    for (int ci = 0; ci < mesh.cells; ++ci) {
      const auto nodes = cell_nodes(mesh, ci, cj);
      for (double s : g)
        for (double t : g) {
          const double fx = f((ci + s) * mesh.h, (cj + t) * mesh.h);
          for (int a = 0; a < 4; ++a) b[nodes[a]] += 0.25 * area * fx * shape(a, s, t);
        }
    }
  for (int n = 0; n < mesh.node_count(); ++n)
    if (mesh.boundary[n]) b[n] = 0.0;
  return b;
}

std::vector<double> assemble_load(const Mesh& mesh, double f) {
  return assemble_load(mesh, [f](double, double) { return f; });
}

}  // namespace sgfem
