#include "neuromst/scorer.hpp"

#include <string>

namespace neuromst {

ScorerParams::ScorerParams(int dim, int labels) : dim_(dim) {
  if (dim < 1) throw ConfigError("scorer dimension must be positive, got " + std::to_string(dim));
  if (labels < 1) throw ConfigError("label count must be positive, got " + std::to_string(labels));
  w.reserve(labels);
  u.reserve(labels);
  v.reserve(labels);
  b.reserve(labels);
  for (int l = 0; l < labels; ++l) {
    const std::string tag = std::to_string(l);
    w.emplace_back("scorer.w" + tag, dim, dim);
    u.emplace_back("scorer.u" + tag, dim, 1);
    v.emplace_back("scorer.v" + tag, dim, 1);
    b.emplace_back("scorer.b" + tag, 1, 1);
  }
}

void ScorerParams::zero_grads() {
  visit([](Tensor& t) { t.zero_grad(); });
}

EdgeScores score_all_edges(const SentenceRepr& repr, const ScorerParams& params) {
  if (repr.dim() != params.dim()) {
    throw ConfigError("representation dim " + std::to_string(repr.dim()) +
                      " does not match scorer dim " + std::to_string(params.dim()));
  }
  const int n = repr.n();
  if (n < 1) throw ConfigError("need at least one token besides the root");

  EdgeScores scores(n, params.labels());
  const Eigen::MatrixXd& r = repr.phi;
  for (int l = 0; l < params.labels(); ++l) {
    const Eigen::MatrixXd bil = (r * params.w[l].value) * r.transpose();
    const Eigen::VectorXd head_term = r * params.u[l].value;
    const Eigen::VectorXd mod_term = r * params.v[l].value;
    const double bias = params.b[l].value(0, 0);
    for (int h = 0; h <= n; ++h) {
      for (int m = 1; m <= n; ++m) {
        if (h == m) continue;
        scores.at(h, m, l) = bil(h, m) + head_term(h) + mod_term(m) + bias;
      }
    }
  }
  return scores;
}

Eigen::MatrixXd score_backward(const SentenceRepr& repr, ScorerParams& params,
                               const EdgeScores& grad_scores) {
  if (repr.dim() != params.dim()) {
    throw ConfigError("representation dim " + std::to_string(repr.dim()) +
                      " does not match scorer dim " + std::to_string(params.dim()));
  }
  if (grad_scores.n() != repr.n() || grad_scores.labels() != params.labels()) {
    throw ConfigError("score gradient shape (n=" + std::to_string(grad_scores.n()) +
                      ", labels=" + std::to_string(grad_scores.labels()) +
                      ") does not match sentence/scorer");
  }
  const int n = repr.n();
  const Eigen::MatrixXd& r = repr.phi;
  Eigen::MatrixXd grad_r = Eigen::MatrixXd::Zero(r.rows(), r.cols());

  Eigen::MatrixXd g(n + 1, n + 1);
  for (int l = 0; l < params.labels(); ++l) {
    g.setZero();
    for (int h = 0; h <= n; ++h) {
      for (int m = 1; m <= n; ++m) {
        if (h == m) continue;
        g(h, m) = grad_scores.at(h, m, l);
      }
    }
    const Eigen::VectorXd row_sum = g.rowwise().sum();
    const Eigen::VectorXd col_sum = g.colwise().sum().transpose();

    params.w[l].grad += r.transpose() * g * r;
    params.u[l].grad += r.transpose() * row_sum;
    params.v[l].grad += r.transpose() * col_sum;
    params.b[l].grad(0, 0) += g.sum();

    grad_r += g * (r * params.w[l].value.transpose());
    grad_r += g.transpose() * (r * params.w[l].value);
    grad_r += row_sum * params.u[l].value.transpose();
    grad_r += col_sum * params.v[l].value.transpose();
  }
  return grad_r;
}

}  // namespace neuromst
