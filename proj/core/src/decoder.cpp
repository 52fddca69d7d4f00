#include "neuromst/decoder.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <string>

namespace neuromst {

namespace {

constexpr double kMaskedScore = -1e30;

// One Chu-Liu-Edmonds level over a dense weight table. Node 0 is the root and
// takes no incoming edge. Returns the chosen head per node (head[0] = -1).
// Greedy picks keep the smallest head index on ties; contraction keeps the
// smallest original-order node on ties, so the whole decode is deterministic.
std::vector<int> cle(const std::vector<std::vector<double>>& w) {
  const int k = static_cast<int>(w.size());
  std::vector<int> pred(k, -1);
  for (int v = 1; v < k; ++v) {
    int best = -1;
    for (int h = 0; h < k; ++h) {
      if (h == v) continue;
      if (best < 0 || w[h][v] > w[best][v]) best = h;
    }
    pred[v] = best;
  }

  // Look for a cycle in the greedy pick.
  std::vector<int> color(k, 0);  // 0 new, 1 on current path, 2 settled
  std::vector<int> cycle;
  color[0] = 2;
  for (int start = 1; start < k && cycle.empty(); ++start) {
    if (color[start] != 0) continue;
    std::vector<int> path;
    int v = start;
    while (color[v] == 0) {
      color[v] = 1;
      path.push_back(v);
      v = pred[v];
    }
    if (color[v] == 1) {
      auto it = std::find(path.begin(), path.end(), v);
      cycle.assign(it, path.end());
    }
    for (int u : path) color[u] = 2;
  }
  if (cycle.empty()) return pred;

  std::vector<char> in_cycle(k, 0);
  for (int v : cycle) in_cycle[v] = 1;

  // Contracted graph: root, the surviving nodes in original order, then the
  // super node last.
  std::vector<int> keep;  // old ids, keep[0] == 0
  std::vector<int> to_new(k, -1);
  for (int v = 0; v < k; ++v) {
    if (!in_cycle[v]) {
      to_new[v] = static_cast<int>(keep.size());
      keep.push_back(v);
    }
  }
  const int super = static_cast<int>(keep.size());
  const int kc = super + 1;

  std::vector<std::vector<double>> wc(kc, std::vector<double>(kc, kMaskedScore));
  std::vector<int> enter_via(k, -1);  // old outside head -> cycle node it enters at
  std::vector<int> exit_via(k, -1);   // old outside node -> cycle node feeding it
  for (int a = 0; a < kc - 1; ++a) {
    for (int b = 1; b < kc - 1; ++b) {
      if (a != b) wc[a][b] = w[keep[a]][keep[b]];
    }
  }
  for (int i = 0; i < static_cast<int>(keep.size()); ++i) {
    const int u = keep[i];
    // Into the cycle: reweight by the broken internal edge.
    double best_in = -std::numeric_limits<double>::infinity();
    int best_in_v = -1;
    for (int v : cycle) {
      const double adj = w[u][v] - w[pred[v]][v];
      if (adj > best_in) {
        best_in = adj;
        best_in_v = v;
      }
    }
    if (best_in_v >= 0) {
      wc[i][super] = best_in;
      enter_via[u] = best_in_v;
    }
    // Out of the cycle.
    if (u != 0) {
      double best_out = -std::numeric_limits<double>::infinity();
      int best_out_v = -1;
      for (int v : cycle) {
        if (w[v][u] > best_out) {
          best_out = w[v][u];
          best_out_v = v;
        }
      }
      wc[super][i] = best_out;
      exit_via[u] = best_out_v;
    }
  }

  const std::vector<int> sub = cle(wc);

  std::vector<int> head(k, -1);
  for (int i = 1; i < kc - 1; ++i) {
    const int v = keep[i];
    head[v] = (sub[i] == super) ? exit_via[v] : keep[sub[i]];
  }
  const int entering_head = keep[sub[super]];
  const int entering_v = enter_via[entering_head];
  for (int v : cycle) head[v] = (v == entering_v) ? entering_head : pred[v];
  return head;
}

double tree_total(const CollapsedScores& collapsed, const DependencyTree& tree) {
  double total = 0.0;
  for (int m = 1; m <= collapsed.n(); ++m) total += collapsed.score(tree.head[m], m);
  return total;
}

DependencyTree decode_unconstrained(const CollapsedScores& collapsed,
                                    const std::vector<double>* root_mask) {
  const int n = collapsed.n();
  std::vector<std::vector<double>> w(n + 1, std::vector<double>(n + 1, kMaskedScore));
  for (int h = 0; h <= n; ++h) {
    for (int m = 1; m <= n; ++m) {
      if (h == m) continue;
      w[h][m] = (h == 0 && root_mask) ? (*root_mask)[m] : collapsed.score(h, m);
    }
  }
  const std::vector<int> head = cle(w);
  DependencyTree tree(n);
  for (int m = 1; m <= n; ++m) {
    tree.head[m] = head[m];
    tree.label[m] = collapsed.label(head[m], m);
  }
  return tree;
}

}  // namespace

CollapsedScores::CollapsedScores(int n) : n_(n) {
  if (n < 1) throw DimensionError("cannot decode an empty sentence (length " + std::to_string(n) + ")");
  score_.assign(static_cast<std::size_t>(n + 1) * (n + 1), 0.0);
  label_.assign(static_cast<std::size_t>(n + 1) * (n + 1), 0);
}

CollapsedScores best_label_per_edge(const EdgeScores& scores) {
  const int n = scores.n();
  CollapsedScores out(n);
  for (int h = 0; h <= n; ++h) {
    for (int m = 1; m <= n; ++m) {
      if (h == m) continue;
      int best = 0;
      for (int l = 1; l < scores.labels(); ++l) {
        if (scores.at(h, m, l) > scores.at(h, m, best)) best = l;
      }
      out.score(h, m) = scores.at(h, m, best);
      out.label(h, m) = best;
    }
  }
  return out;
}

DependencyTree decode_mst(const CollapsedScores& collapsed, bool single_root) {
  const int n = collapsed.n();
  if (!single_root || n == 1) return decode_unconstrained(collapsed, nullptr);

  DependencyTree best(0);
  double best_total = -std::numeric_limits<double>::infinity();
  std::vector<double> mask(n + 1, kMaskedScore);
  for (int c = 1; c <= n; ++c) {
    mask[c] = collapsed.score(0, c);
    DependencyTree candidate = decode_unconstrained(collapsed, &mask);
    mask[c] = kMaskedScore;
    const double total = tree_total(collapsed, candidate);
    if (total > best_total) {
      best_total = total;
      best = std::move(candidate);
    }
  }
  return best;
}

DependencyTree brute_force_argmax(const CollapsedScores& collapsed) {
  const int n = collapsed.n();
  if (n > kEnumerationLimit) {
    throw RefusalError("exhaustive decode refused for length " + std::to_string(n) + " (limit " +
                       std::to_string(kEnumerationLimit) + ")");
  }
  std::vector<int> best_head;
  double best_total = -std::numeric_limits<double>::infinity();
  for_each_arborescence(n, [&](const std::vector<int>& head) {
    double total = 0.0;
    for (int m = 1; m <= n; ++m) total += collapsed.score(head[m], m);
    // Enumeration is lexicographic, so strict improvement keeps the smallest
    // head vector among ties.
    if (total > best_total) {
      best_total = total;
      best_head = head;
    }
  });
  DependencyTree tree(n);
  for (int m = 1; m <= n; ++m) {
    tree.head[m] = best_head[m];
    tree.label[m] = collapsed.label(best_head[m], m);
  }
  return tree;
}

DependencyTree decode(const EdgeScores& scores, bool single_root) {
  return decode_mst(best_label_per_edge(scores), single_root);
}

}  // namespace neuromst
