#pragma once

#include <cstddef>
#include <vector>

#include "neuromst/errors.hpp"

namespace neuromst {

/// Dense real matrix, row-major, 64-bit entries.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  const std::vector<double>& entries() const { return entries_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
};

Matrix multiply(const Matrix& a, const Matrix& b);
double max_abs_diff(const Matrix& a, const Matrix& b);

struct SignLogDet {
  int sign;        // -1, 0, +1
  double log_abs;  // log|det|; -inf when sign == 0
};

/// A pivot whose magnitude falls below this is treated as an exact zero. The
/// Laplacians this library factorizes have strictly positive potentials, so a
/// vanishing pivot signals upstream overflow and must surface, not round off.
inline constexpr double kSingularPivotThreshold = 1e-300;

/// LU factorization with partial pivoting: P*A = L*U with unit-diagonal L.
class LuFactorization {
 public:
  std::size_t order() const { return packed_.rows(); }
  bool singular() const { return singular_pivot_ >= 0; }
  /// Index of the first pivot below threshold; -1 when nonsingular.
  int singular_pivot() const { return singular_pivot_; }

  /// Row permutation: row i of P*A is row perm[i] of A.
  const std::vector<std::size_t>& permutation() const { return perm_; }
  int num_swaps() const { return num_swaps_; }

  Matrix lower() const;
  Matrix upper() const;
  Matrix permutation_matrix() const;

  SignLogDet sign_log_det() const;
  /// Solves A x = b. Throws SingularMatrixError when singular.
  std::vector<double> solve(const std::vector<double>& b) const;
  Matrix inverse() const;

 private:
  friend LuFactorization lu_factorize(const Matrix& m);
  explicit LuFactorization(const Matrix& m);

  Matrix packed_;  // L strictly below the diagonal (unit), U on and above
  std::vector<std::size_t> perm_;
  int num_swaps_ = 0;
  int singular_pivot_ = -1;
};

/// Factorizes a square matrix. Throws DimensionError for non-square input;
/// singularity is reported through the returned object's flag, not an exception.
LuFactorization lu_factorize(const Matrix& m);

/// (sign, log|det|) of a square matrix; sign 0 iff the factorization is singular.
SignLogDet sign_log_det(const Matrix& m);

/// Inverse of a square nonsingular matrix. Throws SingularMatrixError with the
/// offending pivot index when singular.
Matrix inverse(const Matrix& m);

/// Log determinant of a column-diagonally-dominant M-matrix (positive
/// diagonal, non-positive off-diagonals), with excess[j] holding column j's
/// sum. LU elimination loses the determinant's leading digits once such a
/// matrix is ill conditioned; here each pivot is rebuilt from the column
/// excess plus the remaining off-diagonal magnitudes, and the excess
/// propagates additively, so every intermediate is a sum of non-negatives
/// and accuracy does not degrade with conditioning. The stored diagonal is
/// never read. Returns -inf on a vanished pivot. Throws DimensionError for
/// non-square input or a mis-sized excess.
double dominant_log_det(Matrix m, std::vector<double> excess);

}  // namespace neuromst
