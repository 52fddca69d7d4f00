#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace neuromst {

inline constexpr const char* kRootForm = "<ROOT>";

/// One CoNLL-X token row. head = -1 means the HEAD column was "_".
struct Token {
  int id = 0;  // 1-based; 0 only for the synthetic root
  std::string form;
  std::string lemma = "_";
  std::string cpos = "_";
  std::string pos = "_";
  std::string feats = "_";
  int head = -1;
  std::string deprel = "_";
  std::string phead = "_";
  std::string pdeprel = "_";
};

/// Fine POS when present, coarse POS otherwise.
const std::string& effective_pos(const Token& token);

/// Tokens with the root symbol prepended at index 0.
struct Sentence {
  std::vector<Token> tokens;

  int n() const { return static_cast<int>(tokens.size()) - 1; }
};

Sentence make_sentence(std::vector<Token> body);

/// Reads tab-separated 10-column CoNLL-X blocks separated by blank lines.
/// '#' comment lines are skipped. Malformed rows (column count, non-numeric
/// ID/HEAD, gaps in the ID sequence, HEAD out of range) raise ParseError with
/// the offending line number.
std::vector<Sentence> read_conllx(std::istream& in);
std::vector<Sentence> read_conllx_file(const std::string& path);

/// Byte-stable inverse of read_conllx: tabs between the 10 columns, "_" for
/// absent fields, a blank line after every sentence. A token without a head
/// raises OutputError.
void write_conllx(std::ostream& out, const std::vector<Sentence>& sentences);
void write_conllx_file(const std::string& path, const std::vector<Sentence>& sentences);

}  // namespace neuromst
