#pragma once

#include <vector>

#include "neuromst/errors.hpp"
#include "neuromst/tree.hpp"
#include "neuromst/tree_crf.hpp"

namespace neuromst {

/// Label-collapsed edge scores: best score per (head, modifier) and the label
/// that achieved it. Diagonal and root-as-modifier slots are storage only.
class CollapsedScores {
 public:
  explicit CollapsedScores(int n);

  int n() const { return n_; }

  double& score(int h, int m) { return score_[flat(h, m)]; }
  double score(int h, int m) const { return score_[flat(h, m)]; }
  int& label(int h, int m) { return label_[flat(h, m)]; }
  int label(int h, int m) const { return label_[flat(h, m)]; }

 private:
  std::size_t flat(int h, int m) const { return static_cast<std::size_t>(h) * (n_ + 1) + m; }
  int n_;
  std::vector<double> score_;
  std::vector<int> label_;
};

/// Collapse labeled scores: score(h,m) = max_l s[h][m][l], ties to the
/// smallest label id.
CollapsedScores best_label_per_edge(const EdgeScores& scores);

/// Maximum spanning arborescence rooted at node 0 (Chu-Liu-Edmonds, O(n^3)).
/// Score ties prefer the smaller head index. With single_root set, the root
/// keeps exactly one child: the unconstrained decoder runs once per candidate
/// root child with the other root edges masked far below any real total, and
/// the best tree under the original scores wins.
DependencyTree decode_mst(const CollapsedScores& collapsed, bool single_root = false);

/// Exhaustive argmax over all spanning arborescences; ties resolved by the
/// lexicographically smallest head vector. Throws RefusalError past the
/// enumeration bound.
DependencyTree brute_force_argmax(const CollapsedScores& collapsed);

/// Full labeled decode: collapse labels, find the best arborescence, attach
/// the winning label of each chosen edge.
DependencyTree decode(const EdgeScores& scores, bool single_root = false);

}  // namespace neuromst
