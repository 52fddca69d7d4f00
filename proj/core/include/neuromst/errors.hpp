#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace neuromst {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape or size mismatch (non-square matrix, incompatible dimensions, empty input).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A pivot fell below the singularity threshold during factorization.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& msg, int pivot_index)
      : Error(msg), pivot_index_(pivot_index) {}
  int pivot_index() const { return pivot_index_; }

 private:
  int pivot_index_;
};

/// Matrix-Tree inference failed (singular Laplacian minor, non-finite scores,
/// marginals outside tolerance). Signals numerical overflow upstream.
class InferenceError : public Error {
 public:
  using Error::Error;
};

/// A gold structure is not a tree (cycle, rootless token, out-of-range head or label).
class InvalidTreeError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration refused: the instance exceeds the combinatorial bound.
class RefusalError : public Error {
 public:
  using Error::Error;
};

/// Bad configuration: mismatched dimensions, unknown keys, invalid values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A token id fell outside the vocabulary tables.
class VocabError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line)
      : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Output cannot be produced (e.g. a token without a predicted head).
class OutputError : public Error {
 public:
  using Error::Error;
};

/// Evaluation inputs disagree (length or sentence-count mismatch).
class EvalError : public Error {
 public:
  using Error::Error;
};

/// A gradient became NaN/Inf during training; names the offending parameter.
class TrainingDivergenceError : public Error {
 public:
  using Error::Error;
};

/// Checkpoint file is corrupt, truncated, or of an unsupported version.
class CheckpointError : public Error {
 public:
  using Error::Error;
};

}  // namespace neuromst
