#include "neuromst/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

namespace neuromst {

namespace {

void check_shape(std::size_t rows, std::size_t cols) {
  if (rows < 1 || cols < 1) {
    throw DimensionError("matrix must have at least one row and one column");
  }
}

void require_square(const Matrix& m, const char* op) {
  if (!m.square()) {
    throw DimensionError(std::string(op) + ": matrix is not square (" +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ")");
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {
  check_shape(rows, cols);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  check_shape(rows, cols);
  if (entries_.size() != rows_ * cols_) {
    throw DimensionError("entry count " + std::to_string(entries_.size()) +
                         " does not match shape " + std::to_string(rows_) + "x" +
                         std::to_string(cols_));
  }
  for (double v : entries_) {
    if (!std::isfinite(v)) {
      throw DimensionError("matrix entries must be finite");
    }
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("multiply: inner dimensions disagree");
  }
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        out(i, j) += aik * b(k, j);
      }
    }
  }
  return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_diff: shapes disagree");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    worst = std::max(worst, std::fabs(a.entries()[i] - b.entries()[i]));
  }
  return worst;
}

LuFactorization::LuFactorization(const Matrix& m) : packed_(m), perm_(m.rows()) {
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  const std::size_t n = packed_.rows();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot_row = k;
    double best = std::fabs(packed_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double cand = std::fabs(packed_(i, k));
      if (cand > best) {
        best = cand;
        pivot_row = i;
      }
    }
    if (best < kSingularPivotThreshold) {
      singular_pivot_ = static_cast<int>(k);
      return;
    }
    if (pivot_row != k) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(packed_(k, j), packed_(pivot_row, j));
      }
      std::swap(perm_[k], perm_[pivot_row]);
      ++num_swaps_;
    }
    const double pivot = packed_(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = packed_(i, k) / pivot;
      packed_(i, k) = factor;
      for (std::size_t j = k + 1; j < n; ++j) {
        packed_(i, j) -= factor * packed_(k, j);
      }
    }
  }
}

Matrix LuFactorization::lower() const {
  const std::size_t n = order();
  Matrix l = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) l(i, j) = packed_(i, j);
  }
  return l;
}

Matrix LuFactorization::upper() const {
  const std::size_t n = order();
  Matrix u(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) u(i, j) = packed_(i, j);
  }
  return u;
}

Matrix LuFactorization::permutation_matrix() const {
  const std::size_t n = order();
  Matrix p(n, n);
  for (std::size_t i = 0; i < n; ++i) p(i, perm_[i]) = 1.0;
  return p;
}

SignLogDet LuFactorization::sign_log_det() const {
  if (singular()) {
    return {0, -std::numeric_limits<double>::infinity()};
  }
  int sign = (num_swaps_ % 2 == 0) ? 1 : -1;
  double log_abs = 0.0;
  for (std::size_t i = 0; i < order(); ++i) {
    const double d = packed_(i, i);
    if (d < 0.0) sign = -sign;
    log_abs += std::log(std::fabs(d));
  }
  return {sign, log_abs};
}

std::vector<double> LuFactorization::solve(const std::vector<double>& b) const {
  const std::size_t n = order();
  if (singular()) {
    throw SingularMatrixError(
        "solve: matrix is singular at pivot " + std::to_string(singular_pivot_),
        singular_pivot_);
  }
  if (b.size() != n) {
    throw DimensionError("solve: right-hand side length mismatch");
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
  // forward substitution with unit L
  for (std::size_t i = 1; i < n; ++i) {
    double sum = x[i];
    for (std::size_t j = 0; j < i; ++j) sum -= packed_(i, j) * x[j];
    x[i] = sum;
  }
  // back substitution with U
  for (std::size_t ii = n; ii-- > 0;) {
    double sum = x[ii];
    for (std::size_t j = ii + 1; j < n; ++j) sum -= packed_(ii, j) * x[j];
    x[ii] = sum / packed_(ii, ii);
  }
  return x;
}

Matrix LuFactorization::inverse() const {
  const std::size_t n = order();
  if (singular()) {
    throw SingularMatrixError(
        "inverse: matrix is singular at pivot " + std::to_string(singular_pivot_),
        singular_pivot_);
  }
  Matrix inv(n, n);
  std::vector<double> e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    const std::vector<double> col = solve(e);
    e[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

LuFactorization lu_factorize(const Matrix& m) {
  require_square(m, "lu_factorize");
  return LuFactorization(m);
}

SignLogDet sign_log_det(const Matrix& m) {
  require_square(m, "sign_log_det");
  return lu_factorize(m).sign_log_det();
}

Matrix inverse(const Matrix& m) {
  require_square(m, "inverse");
  return lu_factorize(m).inverse();
}

double dominant_log_det(Matrix m, std::vector<double> excess) {
  require_square(m, "dominant_log_det");
  const std::size_t n = m.rows();
  if (excess.size() != n) {
    throw DimensionError("dominant_log_det: excess length " + std::to_string(excess.size()) +
                         " does not match order " + std::to_string(n));
  }
  double log_det = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double pivot = excess[k];
    for (std::size_t i = k + 1; i < n; ++i) pivot -= m(i, k);
    if (!(pivot > 0.0)) return -std::numeric_limits<double>::infinity();
    log_det += std::log(pivot);
    for (std::size_t j = k + 1; j < n; ++j) {
      const double scale = -m(k, j) / pivot;
      if (scale == 0.0) continue;
      excess[j] += scale * excess[k];
      for (std::size_t i = k + 1; i < n; ++i) {
        if (i != j) m(i, j) += scale * m(i, k);
      }
    }
  }
  return log_det;
}

}  // namespace neuromst
