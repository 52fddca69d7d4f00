#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "neuromst/errors.hpp"
#include "neuromst/matrix.hpp"
#include "neuromst/tree.hpp"

namespace neuromst {

/// Labeled edge scores s[h][m][l] for a sentence of n tokens: h in 0..n
/// (0 is the root symbol), m in 1..n, l in 0..L-1. Entries with h == m are
/// storage only; every consumer ignores them.
class EdgeScores {
 public:
  EdgeScores(int n, int labels);

  int n() const { return n_; }
  int labels() const { return labels_; }

  double& at(int h, int m, int l) { return s_[index(h, m, l)]; }
  double at(int h, int m, int l) const { return s_[index(h, m, l)]; }

  std::vector<double>& raw() { return s_; }
  const std::vector<double>& raw() const { return s_; }

  std::size_t index(int h, int m, int l) const {
    return (static_cast<std::size_t>(h) * n_ + (m - 1)) * labels_ + l;
  }

 private:
  int n_;
  int labels_;
  std::vector<double> s_;  // (n+1) * n * L
};

/// Edge marginals mu[h][m][l] plus the label-collapsed mu[h][m].
class MarginalTable {
 public:
  MarginalTable(int n, int labels);

  int n() const { return n_; }
  int labels() const { return labels_; }

  double& mu(int h, int m, int l) { return labeled_[index(h, m, l)]; }
  double mu(int h, int m, int l) const { return labeled_[index(h, m, l)]; }
  double& mu_edge(int h, int m) { return collapsed_[static_cast<std::size_t>(h) * n_ + (m - 1)]; }
  double mu_edge(int h, int m) const { return collapsed_[static_cast<std::size_t>(h) * n_ + (m - 1)]; }

  const std::vector<double>& labeled() const { return labeled_; }

 private:
  std::size_t index(int h, int m, int l) const {
    return (static_cast<std::size_t>(h) * n_ + (m - 1)) * labels_ + l;
  }
  int n_;
  int labels_;
  std::vector<double> labeled_;
  std::vector<double> collapsed_;
};

struct LogPartitionResult {
  double log_z;
  double shift;  // per-edge score offset used for stability
  MarginalTable marginals;
};

/// Largest consumed score entry; subtracted before exponentiation so the
/// potentials never overflow. Exact: every spanning arborescence has n edges,
/// so log Z regains n*shift.
double stability_shift(const EdgeScores& scores);

/// Weighted adjacency over n+1 nodes: A[h][m] = sum_l exp(s[h][m][l] - shift)
/// for h != m, m >= 1; the diagonal and the root column are zero.
Matrix build_adjacency(const EdgeScores& scores);

/// Log-partition and edge marginals via the Matrix-Tree construction: the
/// partition function equals the minor of the Laplacian D - A with the root
/// row and column deleted, and marginals come from that minor's inverse.
LogPartitionResult log_partition(const EdgeScores& scores);

/// d log Z / d s[h][m][l], which equals the labeled edge marginal.
EdgeScores marginal_gradient_of_log_z(const EdgeScores& scores);

struct LossAndGrad {
  double loss;
  EdgeScores grad;
};

/// Negative log-likelihood of the gold tree and its gradient with respect to
/// the edge scores (marginals minus the gold indicator).
LossAndGrad nll_loss_and_grad(const EdgeScores& scores, const DependencyTree& gold);

/// Per-modifier cross-entropy over candidate (head, label) pairs; no tree
/// constraint couples the modifiers.
LossAndGrad head_selection_loss(const EdgeScores& scores, const DependencyTree& gold);

struct BruteForceResult {
  double log_z;
  MarginalTable marginals;
};

/// Enumeration bound for the exhaustive routines below.
inline constexpr int kEnumerationLimit = 8;

/// Exact log-partition and marginals by enumerating every spanning
/// arborescence rooted at node 0 (the root may take several children).
/// Throws RefusalError when n exceeds the enumeration bound.
BruteForceResult brute_force_partition(const EdgeScores& scores);

/// Visits every head vector that forms a spanning arborescence rooted at 0,
/// in lexicographic order of (head[1], ..., head[n]). heads has size n+1.
void for_each_arborescence(int n, const std::function<void(const std::vector<int>&)>& visit);

}  // namespace neuromst
