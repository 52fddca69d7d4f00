#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "neuromst/conllx.hpp"
#include "neuromst/matrix.hpp"
#include "neuromst/tree.hpp"
#include "neuromst/tree_crf.hpp"

namespace testsup {

/// Determinant by recursive cofactor expansion along the first row.
/// Exponential — oracle use only (n <= 9 or so).
double det_by_cofactor(const neuromst::Matrix& m);

/// Uniform entries in [lo, hi).
neuromst::Matrix random_matrix(std::mt19937_64& rng, int n, double lo, double hi);
neuromst::EdgeScores random_scores(std::mt19937_64& rng, int n, int labels, double lo, double hi);

/// Uniform-ish random valid dependency tree with random labels: a random node
/// order, each node attached to the root or an earlier node.
neuromst::DependencyTree random_tree(std::mt19937_64& rng, int n, int labels);

/// Central difference (f(x+h) - f(x-h)) / 2h where `coord` is restored after.
double central_difference(const std::function<double()>& f, double* coord, double h);

/// Deterministic synthetic treebank with a fixed attachment grammar:
/// determiners and adjectives attach to their noun, subjects/objects/adverbs
/// to the verb, the verb to the root; prepositions attach to the verb or the
/// preceding object noun depending on the preposition; an optional final
/// period attaches to the verb. Word forms avoid digits so normalization
/// keeps them distinct.
std::vector<neuromst::Sentence> make_treebank(unsigned long long seed, int count);

/// 10 sentences with heads/labels chosen so UAS and LAS under both
/// punctuation policies are hand-checkable round numbers.
struct EvalFixture {
  std::vector<neuromst::Sentence> gold;
  std::vector<neuromst::Sentence> pred;
  double uas_all, las_all;        // include_all
  double uas_nopunct, las_nopunct;  // exclude_unicode_punct
};
EvalFixture make_eval_fixture();

}  // namespace testsup
