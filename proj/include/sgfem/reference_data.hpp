#pragma once

// Published convergence results used as regression references.

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "sgfem/krylov.hpp"

namespace sgfem {

struct ReferenceCell {
  int iterations;
  double kappa;
};

struct ReferenceRow {
  double sweep;
  std::size_t ndof;
  // none, mean, bgs, hs
  std::array<ReferenceCell, 4> cells;
};

struct ReferenceTable {
  std::string name;
  std::vector<ReferenceRow> rows;
};

/// nullptr for tables without convergence references.
const ReferenceTable* reference_table(const std::string& name);

/// Work-count rows for N = 4, P = 1..8.
const std::vector<WorkCount>& reference_work_counts();

}  // namespace sgfem
