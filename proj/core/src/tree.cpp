#include "neuromst/tree.hpp"

#include <string>

namespace neuromst {

bool is_valid_tree(const DependencyTree& tree) {
  const int n = tree.n();
  if (n < 1) return false;
  for (int m = 1; m <= n; ++m) {
    const int h = tree.head[m];
    if (h < 0 || h > n || h == m) return false;
  }
  for (int m = 1; m <= n; ++m) {
    int node = m;
    int steps = 0;
    while (node != 0) {
      node = tree.head[node];
      if (++steps > n) return false;  // cycle
    }
  }
  return true;
}

void validate_tree(const DependencyTree& tree, int n, int num_labels) {
  if (tree.n() != n) {
    throw InvalidTreeError("gold tree has length " + std::to_string(tree.n()) +
                           ", expected " + std::to_string(n));
  }
  for (int m = 1; m <= n; ++m) {
    const int h = tree.head[m];
    if (h < 0 || h > n) {
      throw InvalidTreeError("token " + std::to_string(m) + " has head " +
                             std::to_string(h) + " out of range 0.." + std::to_string(n));
    }
    if (h == m) {
      throw InvalidTreeError("token " + std::to_string(m) + " is its own head");
    }
    const int l = tree.label[m];
    if (l < 0 || l >= num_labels) {
      throw InvalidTreeError("token " + std::to_string(m) + " has label id " +
                             std::to_string(l) + " outside 0.." +
                             std::to_string(num_labels - 1));
    }
  }
  if (!is_valid_tree(tree)) {
    throw InvalidTreeError("gold structure contains a cycle; not a tree");
  }
}

}  // namespace neuromst
