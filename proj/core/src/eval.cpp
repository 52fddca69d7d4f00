#include "neuromst/eval.hpp"

#include <string>

#include "neuromst/errors.hpp"
#include "neuromst/unicode.hpp"

namespace neuromst {

EvalResult evaluate(const std::vector<Sentence>& gold, const std::vector<Sentence>& predicted,
                    PunctuationPolicy policy) {
  if (gold.size() != predicted.size()) {
    throw EvalError("corpus size mismatch: " + std::to_string(gold.size()) + " gold vs " +
                    std::to_string(predicted.size()) + " predicted sentences");
  }
  EvalResult result;
  result.per_sentence.reserve(gold.size());
  for (std::size_t si = 0; si < gold.size(); ++si) {
    const Sentence& g = gold[si];
    const Sentence& p = predicted[si];
    if (g.n() != p.n()) {
      throw EvalError("sentence " + std::to_string(si + 1) + " has " + std::to_string(g.n()) +
                      " gold tokens but " + std::to_string(p.n()) + " predicted");
    }
    SentenceScore score;
    for (int i = 1; i <= g.n(); ++i) {
      const Token& gt = g.tokens[i];
      const Token& pt = p.tokens[i];
      if (policy == PunctuationPolicy::exclude_unicode_punct && is_all_punctuation(gt.form)) {
        continue;
      }
      if (gt.head < 0) {
        throw EvalError("sentence " + std::to_string(si + 1) + " token " + std::to_string(i) +
                        " has no gold head");
      }
      if (pt.head < 0) {
        throw EvalError("sentence " + std::to_string(si + 1) + " token " + std::to_string(i) +
                        " has no predicted head");
      }
      ++score.scored;
      if (gt.head == pt.head) {
        ++score.correct_heads;
        if (gt.deprel == pt.deprel) ++score.correct_labeled;
      }
    }
    result.scored += score.scored;
    result.correct_heads += score.correct_heads;
    result.correct_labeled += score.correct_labeled;
    result.per_sentence.push_back(score);
  }
  if (result.scored == 0) {
    result.uas = 100.0;
    result.las = 100.0;
  } else {
    result.uas = 100.0 * static_cast<double>(result.correct_heads) / result.scored;
    result.las = 100.0 * static_cast<double>(result.correct_labeled) / result.scored;
  }
  return result;
}

}  // namespace neuromst
