#pragma once

// Q1 elements on a uniform grid of the unit square. All (n+1)^2 nodes stay
// in the algebraic system; homogeneous Dirichlet conditions are imposed by
// row/column elimination (see BoundaryRows).

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "sgfem/sparse_matrix.hpp"

namespace sgfem {

struct Mesh {
  int cells = 0;  // cells per side, 1/h
  double h = 0.0;
  std::vector<double> x, y;     // node coordinates, node = i + j * (cells + 1)
  std::vector<char> boundary;   // 1 on the boundary

  int nodes_per_side() const { return cells + 1; }
  int node_count() const { return static_cast<int>(x.size()); }
  int node(int i, int j) const { return i + j * (cells + 1); }
};

/// Throws std::invalid_argument unless 1/h is a positive integer.
Mesh build_mesh(double h);

/// 9-point Q1 pattern shared by every stiffness matrix on the mesh.
std::shared_ptr<const CsrPattern> q1_pattern(const Mesh& mesh);

enum class BoundaryRows {
  Identity,  // zero rows/columns, unit diagonal (mean matrix)
  Zero,      // zero rows/columns (fluctuation matrices)
  Keep,      // no boundary treatment
};

/// (K)_lm = int k grad(phi_l) . grad(phi_m) dx with k interpolated bilinearly
/// from nodal values, 2x2 Gauss quadrature per cell.
CsrMatrix assemble_weighted_stiffness(const Mesh& mesh,
                                      const std::shared_ptr<const CsrPattern>& pattern,
                                      std::span<const double> field, BoundaryRows bc);

/// Q1 load vector for source f, zero on boundary nodes.
std::vector<double> assemble_load(const Mesh& mesh, const std::function<double(double, double)>& f);
std::vector<double> assemble_load(const Mesh& mesh, double f);

}  // namespace sgfem
