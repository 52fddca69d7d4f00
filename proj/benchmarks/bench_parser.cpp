#include <random>

#include <benchmark/benchmark.h>

#include "neuromst/decoder.hpp"
#include "neuromst/encoder.hpp"
#include "neuromst/matrix.hpp"
#include "neuromst/tree_crf.hpp"
#include "neuromst/trainer.hpp"

using namespace neuromst;

namespace {

EdgeScores random_scores(int n, int labels, unsigned seed) {
  std::mt19937_64 rng(seed);
  EdgeScores s(n, labels);
  for (int h = 0; h <= n; ++h)
    for (int m = 1; m <= n; ++m) {
      if (h == m) continue;
      for (int l = 0; l < labels; ++l) s.at(h, m, l) = symmetric_uniform(rng, 3.0);
    }
  return s;
}

void bench_log_partition(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const EdgeScores scores = random_scores(n, 10, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_partition(scores).log_z);
  }
  state.SetComplexityN(n);
}
BENCHMARK(bench_log_partition)->Arg(10)->Arg(20)->Arg(40)->Arg(80)->Complexity(benchmark::oNCubed);

void bench_decode_mst(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CollapsedScores collapsed = best_label_per_edge(random_scores(n, 10, 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(decode_mst(collapsed).head.size());
  }
}
BENCHMARK(bench_decode_mst)->Arg(10)->Arg(20)->Arg(40)->Arg(80);

void bench_lu_factorize(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = symmetric_uniform(rng, 1.0) + (i == j ? n : 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lu_factorize(m).sign_log_det().log_abs);
  }
}
BENCHMARK(bench_lu_factorize)->Arg(16)->Arg(64)->Arg(128);

void bench_encoder_forward(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  EncoderConfig cfg;
  cfg.dropout_embed = cfg.dropout_hidden = cfg.dropout_layer = 0.0;
  EncoderParams params(cfg, 100, 60, 10);
  std::mt19937_64 init_rng(4);
  {
    Model model(cfg, 100, 60, 10, 5);
    init_params(model, init_rng);
    params = model.encoder;
  }
  TokenSeq tokens;
  tokens.push_back({kRootId, {kRootId}, kRootId});
  std::mt19937_64 word_rng(5);
  for (int i = 0; i < n; ++i) {
    EncodedToken tok;
    tok.word = 3 + static_cast<int>(word_rng() % 97);
    tok.pos = 3 + static_cast<int>(word_rng() % 7);
    const int len = 2 + static_cast<int>(word_rng() % 6);
    for (int c = 0; c < len; ++c) tok.chars.push_back(3 + static_cast<int>(word_rng() % 57));
    tokens.push_back(tok);
  }
  std::mt19937_64 rng(6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(encode_sentence(tokens, params, false, rng).phi.sum());
  }
}
BENCHMARK(bench_encoder_forward)->Arg(10)->Arg(30);

}  // namespace

BENCHMARK_MAIN();
