#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "neuromst/conllx.hpp"
#include "neuromst/encoder.hpp"
#include "neuromst/tree.hpp"

namespace neuromst {

/// Lowercase ASCII letters and collapse digit runs to a single "0".
std::string normalize_form(const std::string& form);

/// Id maps for words, characters (codepoints), POS tags, and dependency
/// labels. Words, chars, and POS reserve PAD/UNK/ROOT rows; labels do not
/// (the label count is exactly the number of distinct DEPREL strings).
struct Vocab {
  std::vector<std::string> words;     // id -> normalized form
  std::vector<uint32_t> chars;        // id -> codepoint (reserved rows hold 0)
  std::vector<std::string> pos_tags;  // id -> tag
  std::vector<std::string> labels;    // id -> deprel
  std::vector<long long> word_freq;   // training frequency per word id

  std::unordered_map<std::string, int> word_ids;
  std::unordered_map<uint32_t, int> char_ids;
  std::unordered_map<std::string, int> pos_ids;
  std::unordered_map<std::string, int> label_ids;

  int word_id(const std::string& normalized) const;  // UNK when absent
  int char_id(uint32_t cp) const;                    // UNK when absent
  int pos_id(const std::string& tag) const;          // UNK when absent
  int label_id(const std::string& deprel) const;     // -1 when absent
  int num_labels() const { return static_cast<int>(labels.size()); }
  bool is_singleton(int word_id) const;

  void rebuild_maps();  // after deserialization
};

/// Deterministic vocabulary: ids are assigned by (frequency desc,
/// lexicographic asc) after the reserved rows. Words below min_freq are left
/// out (they hit UNK at lookup) unless the pretrained list contains them.
Vocab build_vocab(const std::vector<Sentence>& train,
                  const std::vector<std::string>* pretrained_words = nullptr, int min_freq = 1);

/// Sentence -> ids for the encoder; index 0 becomes the root symbol (ROOT
/// word/POS rows, characters of its literal form string).
TokenSeq encode_tokens(const Sentence& sentence, const Vocab& vocab);

/// Gold structure from the HEAD/DEPREL columns. Throws InvalidTreeError when
/// a head is missing or the structure is not a tree, VocabError for a DEPREL
/// outside the label inventory.
DependencyTree gold_tree(const Sentence& sentence, const Vocab& vocab);

}  // namespace neuromst
