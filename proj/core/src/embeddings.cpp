#include "neuromst/embeddings.hpp"

#include <fstream>
#include <sstream>

#include "neuromst/errors.hpp"

namespace neuromst {

PretrainedEmbeddings load_pretrained_embeddings(std::istream& in) {
  std::vector<std::string> words;
  std::vector<std::vector<double>> rows;
  int dim = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string word;
    fields >> word;
    std::vector<double> values;
    double v;
    while (fields >> v) values.push_back(v);
    if (values.empty()) {
      throw ConfigError("embedding line " + std::to_string(line_no) + " has no values");
    }
    if (dim < 0) {
      dim = static_cast<int>(values.size());
    } else if (static_cast<int>(values.size()) != dim) {
      throw ConfigError("embedding line " + std::to_string(line_no) + " has " +
                        std::to_string(values.size()) + " values, expected " + std::to_string(dim));
    }
    words.push_back(std::move(word));
    rows.push_back(std::move(values));
  }
  if (words.empty()) throw ConfigError("embedding file contains no vectors");

  PretrainedEmbeddings out;
  out.words = std::move(words);
  out.vectors.resize(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int c = 0; c < dim; ++c) out.vectors(static_cast<Eigen::Index>(r), c) = rows[r][c];
  }
  return out;
}

PretrainedEmbeddings load_pretrained_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open embedding file: " + path);
  return load_pretrained_embeddings(in);
}

}  // namespace neuromst
