#pragma once

#include <vector>

#include "neuromst/conllx.hpp"

namespace neuromst {

enum class PunctuationPolicy {
  include_all,
  exclude_unicode_punct,  // skip tokens whose form is entirely punctuation
};

struct SentenceScore {
  int scored = 0;
  int correct_heads = 0;
  int correct_labeled = 0;
};

struct EvalResult {
  double uas = 0.0;  // percentages in [0,100]
  double las = 0.0;
  long long scored = 0;
  long long correct_heads = 0;
  long long correct_labeled = 0;
  std::vector<SentenceScore> per_sentence;
};

/// Attachment scores over aligned corpora: a token counts for UAS when its
/// predicted head matches gold, for LAS when the label matches too. With an
/// empty denominator both scores are 100. Misaligned inputs raise EvalError
/// naming the sentence.
EvalResult evaluate(const std::vector<Sentence>& gold, const std::vector<Sentence>& predicted,
                    PunctuationPolicy policy);

}  // namespace neuromst
