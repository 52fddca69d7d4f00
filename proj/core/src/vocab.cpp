#include "neuromst/vocab.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "neuromst/errors.hpp"
#include "neuromst/unicode.hpp"

namespace neuromst {

std::string normalize_form(const std::string& form) {
  std::string out;
  out.reserve(form.size());
  bool in_digits = false;
  for (unsigned char c : form) {
    if (std::isdigit(c)) {
      if (!in_digits) out.push_back('0');
      in_digits = true;
    } else {
      in_digits = false;
      out.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  return out;
}

int Vocab::word_id(const std::string& normalized) const {
  const auto it = word_ids.find(normalized);
  return it == word_ids.end() ? kUnkId : it->second;
}

int Vocab::char_id(uint32_t cp) const {
  const auto it = char_ids.find(cp);
  return it == char_ids.end() ? kUnkId : it->second;
}

int Vocab::pos_id(const std::string& tag) const {
  const auto it = pos_ids.find(tag);
  return it == pos_ids.end() ? kUnkId : it->second;
}

int Vocab::label_id(const std::string& deprel) const {
  const auto it = label_ids.find(deprel);
  return it == label_ids.end() ? -1 : it->second;
}

bool Vocab::is_singleton(int id) const {
  return id >= 0 && id < static_cast<int>(word_freq.size()) && word_freq[id] == 1;
}

void Vocab::rebuild_maps() {
  word_ids.clear();
  char_ids.clear();
  pos_ids.clear();
  label_ids.clear();
  for (std::size_t i = 0; i < words.size(); ++i) word_ids.emplace(words[i], static_cast<int>(i));
  for (std::size_t i = 0; i < chars.size(); ++i) char_ids.emplace(chars[i], static_cast<int>(i));
  for (std::size_t i = 0; i < pos_tags.size(); ++i) pos_ids.emplace(pos_tags[i], static_cast<int>(i));
  for (std::size_t i = 0; i < labels.size(); ++i) label_ids.emplace(labels[i], static_cast<int>(i));
  // Reserved rows share placeholder values; keep the reserved ids canonical.
  char_ids[0] = kPadId;
}

namespace {

// (frequency desc, key asc) ordering shared by every table.
template <class K>
std::vector<K> ranked_keys(const std::map<K, long long>& freq) {
  std::vector<K> keys;
  keys.reserve(freq.size());
  for (const auto& [k, f] : freq) keys.push_back(k);
  std::stable_sort(keys.begin(), keys.end(), [&](const K& a, const K& b) {
    const long long fa = freq.at(a);
    const long long fb = freq.at(b);
    if (fa != fb) return fa > fb;
    return a < b;
  });
  return keys;
}

}  // namespace

Vocab build_vocab(const std::vector<Sentence>& train, const std::vector<std::string>* pretrained,
                  int min_freq) {
  if (train.empty()) throw VocabError("cannot build a vocabulary from an empty training set");

  std::map<std::string, long long> word_freq;
  std::map<uint32_t, long long> char_freq;
  std::map<std::string, long long> pos_freq;
  std::map<std::string, long long> label_freq;
  for (const Sentence& s : train) {
    for (int i = 1; i <= s.n(); ++i) {
      const Token& t = s.tokens[i];
      ++word_freq[normalize_form(t.form)];
      for (uint32_t cp : utf8_decode(t.form)) ++char_freq[cp];
      ++pos_freq[effective_pos(t)];
      ++label_freq[t.deprel];
    }
  }

  Vocab v;
  v.words = {"<PAD>", "<UNK>", kRootForm};
  v.word_freq = {0, 0, 0};
  v.chars = {0, 0, 0};
  v.pos_tags = {"<PAD>", "<UNK>", kRootForm};

  std::map<std::string, bool> pretrained_set;
  if (pretrained) {
    for (const std::string& w : *pretrained) pretrained_set.emplace(normalize_form(w), true);
  }

  for (const std::string& w : ranked_keys(word_freq)) {
    const long long f = word_freq[w];
    const bool keep = f >= min_freq || pretrained_set.count(w) > 0;
    if (!keep) continue;
    if (std::find(v.words.begin(), v.words.end(), w) != v.words.end()) continue;
    v.words.push_back(w);
    v.word_freq.push_back(f);
  }
  if (pretrained) {
    // Pretrained-only words, in file order, so their rows stay addressable.
    for (const std::string& raw : *pretrained) {
      const std::string w = normalize_form(raw);
      if (word_freq.count(w) > 0) continue;
      if (std::find(v.words.begin(), v.words.end(), w) != v.words.end()) continue;
      v.words.push_back(w);
      v.word_freq.push_back(0);
    }
  }

  for (uint32_t cp : ranked_keys(char_freq)) v.chars.push_back(cp);
  for (const std::string& p : ranked_keys(pos_freq)) v.pos_tags.push_back(p);
  for (const std::string& l : ranked_keys(label_freq)) v.labels.push_back(l);

  v.rebuild_maps();
  return v;
}

TokenSeq encode_tokens(const Sentence& sentence, const Vocab& vocab) {
  TokenSeq seq;
  seq.reserve(sentence.tokens.size());
  for (int i = 0; i < static_cast<int>(sentence.tokens.size()); ++i) {
    EncodedToken tok;
    const Token& t = sentence.tokens[i];
    if (i == 0) {
      tok.word = kRootId;
      tok.pos = kRootId;
    } else {
      tok.word = vocab.word_id(normalize_form(t.form));
      tok.pos = vocab.pos_id(effective_pos(t));
    }
    for (uint32_t cp : utf8_decode(t.form)) tok.chars.push_back(vocab.char_id(cp));
    if (tok.chars.empty()) tok.chars.push_back(kUnkId);
    seq.push_back(std::move(tok));
  }
  return seq;
}

DependencyTree gold_tree(const Sentence& sentence, const Vocab& vocab) {
  const int n = sentence.n();
  DependencyTree tree(n);
  for (int m = 1; m <= n; ++m) {
    const Token& t = sentence.tokens[m];
    if (t.head < 0) throw InvalidTreeError("token " + std::to_string(m) + " has no head");
    tree.head[m] = t.head;
    const int label = vocab.label_id(t.deprel);
    if (label < 0) {
      throw VocabError("dependency label '" + t.deprel + "' is outside the label inventory");
    }
    tree.label[m] = label;
  }
  validate_tree(tree, n, vocab.num_labels());
  return tree;
}

}  // namespace neuromst
