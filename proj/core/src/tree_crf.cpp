#include "neuromst/tree_crf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace neuromst {

namespace {

void check_sizes(int n, int labels) {
  if (n < 1) throw DimensionError("sentence length must be at least 1, got " + std::to_string(n));
  if (labels < 1) throw DimensionError("label count must be at least 1, got " + std::to_string(labels));
}

// log(sum_l exp(s[h][m][l])) for one edge, max-shifted.
double edge_logsumexp(const EdgeScores& s, int h, int m) {
  double hi = -std::numeric_limits<double>::infinity();
  for (int l = 0; l < s.labels(); ++l) hi = std::max(hi, s.at(h, m, l));
  double acc = 0.0;
  for (int l = 0; l < s.labels(); ++l) acc += std::exp(s.at(h, m, l) - hi);
  return hi + std::log(acc);
}

// log det of the minor with modifier m forced onto head h: column m-1
// becomes e_{m-1} - e_{h-1} (just e_{m-1} for the root), up to the edge
// weight, which the caller adds back. -inf when no such tree has weight.
double forced_edge_log_det(const Matrix& minor, const std::vector<double>& excess, int m, int h) {
  Matrix c = minor;
  std::vector<double> ex = excess;
  const int n = static_cast<int>(minor.rows());
  for (int i = 0; i < n; ++i) c(i, m - 1) = 0.0;
  c(m - 1, m - 1) = 1.0;
  if (h >= 1) c(h - 1, m - 1) = -1.0;
  ex[m - 1] = (h == 0) ? 1.0 : 0.0;
  return dominant_log_det(std::move(c), std::move(ex));
}

}  // namespace

EdgeScores::EdgeScores(int n, int labels) : n_(n), labels_(labels) {
  check_sizes(n, labels);
  s_.assign(static_cast<std::size_t>(n + 1) * n * labels, 0.0);
}

MarginalTable::MarginalTable(int n, int labels) : n_(n), labels_(labels) {
  check_sizes(n, labels);
  labeled_.assign(static_cast<std::size_t>(n + 1) * n * labels, 0.0);
  collapsed_.assign(static_cast<std::size_t>(n + 1) * n, 0.0);
}

double stability_shift(const EdgeScores& scores) {
  double hi = -std::numeric_limits<double>::infinity();
  for (int h = 0; h <= scores.n(); ++h) {
    for (int m = 1; m <= scores.n(); ++m) {
      if (h == m) continue;
      for (int l = 0; l < scores.labels(); ++l) {
        const double v = scores.at(h, m, l);
        if (!std::isfinite(v)) {
          throw InferenceError("non-finite edge score at head " + std::to_string(h) +
                               ", modifier " + std::to_string(m));
        }
        hi = std::max(hi, v);
      }
    }
  }
  return hi;
}

Matrix build_adjacency(const EdgeScores& scores) {
  const int n = scores.n();
  const double shift = stability_shift(scores);
  Matrix a(n + 1, n + 1);
  for (int h = 0; h <= n; ++h) {
    for (int m = 1; m <= n; ++m) {
      if (h == m) continue;
      double sum = 0.0;
      for (int l = 0; l < scores.labels(); ++l) sum += std::exp(scores.at(h, m, l) - shift);
      a(h, m) = sum;
    }
  }
  return a;
}

LogPartitionResult log_partition(const EdgeScores& scores) {
  const int n = scores.n();
  const int labels = scores.labels();
  const double shift = stability_shift(scores);

  // Each modifier's column is rescaled to its own maximum on top of the
  // global shift. Scaling column m of the adjacency by a positive factor
  // scales column m of the minor, so the determinant regains the factors as
  // a sum of logs and the factor cancels exactly in the marginal formula.
  // This keeps every column of the minor at unit scale: with only the global
  // shift a confident model stretches the minor's dynamic range until its
  // inverse loses the [0,1] marginal guarantee.
  std::vector<double> col_max(n + 1, 0.0);
  for (int m = 1; m <= n; ++m) {
    double hi = -std::numeric_limits<double>::infinity();
    for (int h = 0; h <= n; ++h) {
      if (h == m) continue;
      for (int l = 0; l < labels; ++l) hi = std::max(hi, scores.at(h, m, l));
    }
    col_max[m] = hi;
  }

  Matrix a(n + 1, n + 1);
  for (int h = 0; h <= n; ++h) {
    for (int m = 1; m <= n; ++m) {
      if (h == m) continue;
      double sum = 0.0;
      for (int l = 0; l < labels; ++l) sum += std::exp(scores.at(h, m, l) - col_max[m]);
      a(h, m) = sum;
    }
  }

  // Root-deleted Laplacian minor: B[i][j] = L[i+1][j+1], L = D − A with
  // D holding column sums of A.
  Matrix b(n, n);
  for (int m = 1; m <= n; ++m) {
    double degree = 0.0;
    for (int h = 0; h <= n; ++h) degree += a(h, m);
    for (int h = 1; h <= n; ++h) b(h - 1, m - 1) = (h == m) ? degree - a(h, m) : -a(h, m);
  }

  const LuFactorization lu = lu_factorize(b);
  if (lu.singular()) {
    throw InferenceError("Laplacian minor is singular for sentence of length " + std::to_string(n));
  }
  const SignLogDet det = lu.sign_log_det();
  if (det.sign != 1) {
    throw InferenceError("Laplacian minor has non-positive determinant for sentence of length " +
                         std::to_string(n));
  }
  double log_z = det.log_abs;
  for (int m = 1; m <= n; ++m) log_z += col_max[m];

  const Matrix binv = lu.inverse();
  MarginalTable table(n, labels);
  std::vector<char> redo(n + 1, 0);
  for (int m = 1; m <= n; ++m) {
    for (int h = 0; h <= n; ++h) {
      if (h == m) continue;
      double mu = (h == 0) ? a(0, m) * binv(m - 1, m - 1)
                           : a(h, m) * (binv(m - 1, m - 1) - binv(m - 1, h - 1));
      if (mu < 0.0 || mu > 1.0) {
        const double excess = (mu < 0.0) ? -mu : mu - 1.0;
        if (excess > 1e-8) {
          redo[m] = 1;
          break;
        }
        mu = std::clamp(mu, 0.0, 1.0);
      }
      table.mu_edge(h, m) = mu;
    }
  }

  // The cofactor difference above cancels catastrophically when the minor is
  // ill conditioned (a confident model concentrating mass near a cycle), and
  // LU determinants lose the same leading digits. Affected columns fall back
  // to the ratio mu = Z_forced / Z: trees through the edge are a subset of
  // all trees, so the ratio is bounded by one, and both determinants come
  // from the subtraction-free elimination above, which holds machine
  // precision whatever the conditioning. The excess of minor column j is the
  // root edge weight a(0, j+1), the one adjacency entry a column's diagonal
  // gains over its off-diagonals.
  double stable_log_det = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> root_mass;
  for (int m = 1; m <= n; ++m) {
    if (!redo[m]) continue;
    if (std::isnan(stable_log_det)) {
      root_mass.resize(n);
      for (int j = 0; j < n; ++j) root_mass[j] = a(0, j + 1);
      stable_log_det = dominant_log_det(b, root_mass);
      if (!std::isfinite(stable_log_det)) {
        throw InferenceError("Laplacian minor is singular for sentence of length " +
                             std::to_string(n));
      }
    }
    for (int h = 0; h <= n; ++h) {
      if (h == m) continue;
      const double forced = forced_edge_log_det(b, root_mass, m, h);
      double mu = (a(h, m) > 0.0 && std::isfinite(forced))
                      ? std::exp(std::log(a(h, m)) + forced - stable_log_det)
                      : 0.0;
      if (mu < 0.0 || mu > 1.0) {
        const double excess = (mu < 0.0) ? -mu : mu - 1.0;
        if (excess > 1e-8) {
          throw InferenceError("edge marginal " + std::to_string(mu) +
                               " leaves [0,1] for sentence of length " + std::to_string(n));
        }
        mu = std::clamp(mu, 0.0, 1.0);
      }
      table.mu_edge(h, m) = mu;
    }
  }

  for (int m = 1; m <= n; ++m) {
    for (int h = 0; h <= n; ++h) {
      if (h == m) continue;
      // Conditioned on the edge, labels factorize as a softmax of its scores.
      const double mu = table.mu_edge(h, m);
      for (int l = 0; l < labels; ++l) {
        table.mu(h, m, l) =
            (a(h, m) > 0.0) ? mu * std::exp(scores.at(h, m, l) - col_max[m]) / a(h, m) : 0.0;
      }
    }
  }
  return LogPartitionResult{log_z, shift, std::move(table)};
}

EdgeScores marginal_gradient_of_log_z(const EdgeScores& scores) {
  const LogPartitionResult result = log_partition(scores);
  EdgeScores grad(scores.n(), scores.labels());
  for (int h = 0; h <= scores.n(); ++h) {
    for (int m = 1; m <= scores.n(); ++m) {
      if (h == m) continue;
      for (int l = 0; l < scores.labels(); ++l) grad.at(h, m, l) = result.marginals.mu(h, m, l);
    }
  }
  return grad;
}

LossAndGrad nll_loss_and_grad(const EdgeScores& scores, const DependencyTree& gold) {
  const int n = scores.n();
  validate_tree(gold, n, scores.labels());
  const LogPartitionResult result = log_partition(scores);
  double gold_score = 0.0;
  for (int m = 1; m <= n; ++m) gold_score += scores.at(gold.head[m], m, gold.label[m]);

  EdgeScores grad = marginal_gradient_of_log_z(scores);
  for (int m = 1; m <= n; ++m) grad.at(gold.head[m], m, gold.label[m]) -= 1.0;
  return LossAndGrad{result.log_z - gold_score, std::move(grad)};
}

LossAndGrad head_selection_loss(const EdgeScores& scores, const DependencyTree& gold) {
  const int n = scores.n();
  const int labels = scores.labels();
  validate_tree(gold, n, scores.labels());

  EdgeScores grad(n, labels);
  double loss = 0.0;
  for (int m = 1; m <= n; ++m) {
    double hi = -std::numeric_limits<double>::infinity();
    for (int h = 0; h <= n; ++h) {
      if (h == m) continue;
      for (int l = 0; l < labels; ++l) hi = std::max(hi, scores.at(h, m, l));
    }
    double acc = 0.0;
    for (int h = 0; h <= n; ++h) {
      if (h == m) continue;
      for (int l = 0; l < labels; ++l) acc += std::exp(scores.at(h, m, l) - hi);
    }
    const double lse = hi + std::log(acc);
    loss += lse - scores.at(gold.head[m], m, gold.label[m]);
    for (int h = 0; h <= n; ++h) {
      if (h == m) continue;
      for (int l = 0; l < labels; ++l) grad.at(h, m, l) = std::exp(scores.at(h, m, l) - lse);
    }
    grad.at(gold.head[m], m, gold.label[m]) -= 1.0;
  }
  return LossAndGrad{loss, std::move(grad)};
}

void for_each_arborescence(int n, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> head(n + 1, -1);

  // head[m] cycles 0..n skipping m; validity = every node walks up to 0.
  auto valid = [&]() {
    for (int m = 1; m <= n; ++m) {
      int cur = m;
      int steps = 0;
      while (cur != 0) {
        cur = head[cur];
        if (++steps > n) return false;
      }
    }
    return true;
  };

  std::function<void(int)> rec = [&](int m) {
    if (m > n) {
      if (valid()) visit(head);
      return;
    }
    for (int h = 0; h <= n; ++h) {
      if (h == m) continue;
      head[m] = h;
      rec(m + 1);
    }
    head[m] = -1;
  };
  rec(1);
}

BruteForceResult brute_force_partition(const EdgeScores& scores) {
  const int n = scores.n();
  const int labels = scores.labels();
  if (n > kEnumerationLimit) {
    throw RefusalError("exhaustive enumeration refused for length " + std::to_string(n) +
                       " (limit " + std::to_string(kEnumerationLimit) + ")");
  }

  // Collapsed per-edge log-weight: log sum_l exp(s).
  std::vector<double> w(static_cast<std::size_t>(n + 1) * (n + 1), 0.0);
  for (int h = 0; h <= n; ++h) {
    for (int m = 1; m <= n; ++m) {
      if (h == m) continue;
      w[static_cast<std::size_t>(h) * (n + 1) + m] = edge_logsumexp(scores, h, m);
    }
  }
  auto tree_score = [&](const std::vector<int>& head) {
    double total = 0.0;
    for (int m = 1; m <= n; ++m) total += w[static_cast<std::size_t>(head[m]) * (n + 1) + m];
    return total;
  };

  // Pass 1: running log-sum-exp over all tree scores.
  double hi = -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  bool any = false;
  for_each_arborescence(n, [&](const std::vector<int>& head) {
    any = true;
    const double score = tree_score(head);
    if (score > hi) {
      acc = acc * std::exp(hi - score) + 1.0;
      hi = score;
    } else {
      acc += std::exp(score - hi);
    }
  });
  if (!any) throw InferenceError("no spanning arborescence exists for length " + std::to_string(n));
  const double log_z = hi + std::log(acc);

  // Pass 2: accumulate tree probabilities onto their edges.
  MarginalTable table(n, labels);
  for_each_arborescence(n, [&](const std::vector<int>& head) {
    const double p = std::exp(tree_score(head) - log_z);
    for (int m = 1; m <= n; ++m) table.mu_edge(head[m], m) += p;
  });
  for (int h = 0; h <= n; ++h) {
    for (int m = 1; m <= n; ++m) {
      if (h == m) continue;
      const double lse = w[static_cast<std::size_t>(h) * (n + 1) + m];
      for (int l = 0; l < labels; ++l) {
        table.mu(h, m, l) = table.mu_edge(h, m) * std::exp(scores.at(h, m, l) - lse);
      }
    }
  }
  return BruteForceResult{log_z, std::move(table)};
}

}  // namespace neuromst
