#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

namespace neuromst {

/// Pretrained word vectors from a text file: one token per line followed by
/// whitespace-separated reals. The dimension comes from the first line.
struct PretrainedEmbeddings {
  std::vector<std::string> words;
  Eigen::MatrixXd vectors;  // words.size() x dim

  int dim() const { return static_cast<int>(vectors.cols()); }
};

PretrainedEmbeddings load_pretrained_embeddings(std::istream& in);
PretrainedEmbeddings load_pretrained_embeddings(const std::string& path);

}  // namespace neuromst
