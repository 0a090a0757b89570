#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "textclass/textprep.hpp"

namespace textclass {

// Sparse row: (term id, weight) pairs sorted by term id.
using SparseEntry = std::pair<TermId, double>;

struct SparseVector {
  std::vector<SparseEntry> entries;

  double l2_norm() const;
  double dot(const SparseVector& other) const;
};

// Sum of |x_i - y_i| over the union of the two supports.
double manhattan_distance(const SparseVector& a, const SparseVector& b);

struct SparseMatrix {
  std::size_t cols = 0;
  std::vector<SparseVector> rows;

  std::size_t row_count() const { return rows.size(); }

  // Coordinate-format text: one "row,col,value" line per entry.
  void save_coo(const std::string& path) const;
  static SparseMatrix load_coo(const std::string& path);
};

}  // namespace textclass
