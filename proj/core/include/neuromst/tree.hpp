#pragma once

#include <vector>

#include "neuromst/errors.hpp"

namespace neuromst {

/// A labeled dependency tree over a sentence of n tokens plus the artificial
/// root at position 0. head[m] and label[m] are defined for m in 1..n; the
/// entries at index 0 are sentinels.
struct DependencyTree {
  std::vector<int> head;   // size n+1, head[0] == -1
  std::vector<int> label;  // size n+1, label[0] == -1

  explicit DependencyTree(int n = 0)
      : head(static_cast<std::size_t>(n) + 1, -1),
        label(static_cast<std::size_t>(n) + 1, -1) {}

  int n() const { return static_cast<int>(head.size()) - 1; }
};

/// True iff every head index is in range, no token is its own head, and
/// following head pointers from any token reaches the root.
bool is_valid_tree(const DependencyTree& tree);

/// Throws InvalidTreeError unless the tree is valid for `n` tokens and every
/// label id is in [0, num_labels).
void validate_tree(const DependencyTree& tree, int n, int num_labels);

}  // namespace neuromst
