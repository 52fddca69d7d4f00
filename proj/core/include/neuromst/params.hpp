#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <utility>

namespace neuromst {

/// One named trainable array with its gradient buffer. Vectors are stored as
/// single-column matrices; scalars as 1x1.
struct Tensor {
  std::string name;
  Eigen::MatrixXd value;
  Eigen::MatrixXd grad;

  Tensor() = default;
  Tensor(std::string n, Eigen::Index rows, Eigen::Index cols)
      : name(std::move(n)),
        value(Eigen::MatrixXd::Zero(rows, cols)),
        grad(Eigen::MatrixXd::Zero(rows, cols)) {}

  void zero_grad() { grad.setZero(); }
};

/// Uniform double in [0, 1) from the top 53 bits of the generator; avoids
/// implementation-defined std distributions so runs reproduce exactly.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [-half_width, half_width).
inline double symmetric_uniform(std::mt19937_64& rng, double half_width) {
  return (2.0 * unit_uniform(rng) - 1.0) * half_width;
}

}  // namespace neuromst
