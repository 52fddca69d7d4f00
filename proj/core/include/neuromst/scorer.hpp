#pragma once

#include <Eigen/Dense>
#include <vector>

#include "neuromst/errors.hpp"
#include "neuromst/params.hpp"
#include "neuromst/tree_crf.hpp"

namespace neuromst {

/// Per-token representation vectors; row i is the vector for token i, row 0
/// the root symbol.
struct SentenceRepr {
  Eigen::MatrixXd phi;  // (n+1) x d

  int n() const { return static_cast<int>(phi.rows()) - 1; }
  int dim() const { return static_cast<int>(phi.cols()); }
};

/// Bilinear scorer parameters, one (W, U, V, b) block per label.
struct ScorerParams {
  ScorerParams(int dim, int labels);

  int dim() const { return dim_; }
  int labels() const { return static_cast<int>(w.size()); }

  std::vector<Tensor> w;  // d x d
  std::vector<Tensor> u;  // d x 1, head term
  std::vector<Tensor> v;  // d x 1, modifier term
  std::vector<Tensor> b;  // 1 x 1

  template <class F>
  void visit(F&& fn) {
    for (int l = 0; l < labels(); ++l) {
      fn(w[l]);
      fn(u[l]);
      fn(v[l]);
      fn(b[l]);
    }
  }
  template <class F>
  void visit(F&& fn) const {
    for (int l = 0; l < labels(); ++l) {
      fn(w[l]);
      fn(u[l]);
      fn(v[l]);
      fn(b[l]);
    }
  }
  void zero_grads();

 private:
  int dim_;
};

/// s[h][m][l] = phi_h' W_l phi_m + U_l . phi_h + V_l . phi_m + b_l for every
/// ordered pair h != m with m >= 1.
EdgeScores score_all_edges(const SentenceRepr& repr, const ScorerParams& params);

/// Reverse pass of score_all_edges for the scalar sum(grad_scores * scores):
/// accumulates into each parameter's grad buffer and returns the gradient with
/// respect to repr.phi.
Eigen::MatrixXd score_backward(const SentenceRepr& repr, ScorerParams& params,
                               const EdgeScores& grad_scores);

}  // namespace neuromst
