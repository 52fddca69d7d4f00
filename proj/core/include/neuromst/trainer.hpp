#pragma once

#include <iosfwd>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "neuromst/embeddings.hpp"
#include "neuromst/encoder.hpp"
#include "neuromst/eval.hpp"
#include "neuromst/scorer.hpp"
#include "neuromst/vocab.hpp"

namespace neuromst {

/// Every trainable parameter of the parser: representation learner plus the
/// bilinear scorer (one block per dependency label).
struct Model {
  Model(const EncoderConfig& config, int num_words, int num_chars, int num_pos, int num_labels)
      : encoder(config, num_words, num_chars, num_pos),
        scorer(config.mlp_dim, num_labels) {}

  EncoderParams encoder;
  ScorerParams scorer;

  template <class F>
  void visit(F&& fn) {
    encoder.visit(fn);
    scorer.visit(fn);
  }
  template <class F>
  void visit(F&& fn) const {
    encoder.visit(fn);
    scorer.visit(fn);
  }
  void zero_grads() {
    visit([](Tensor& t) { t.zero_grad(); });
  }
};

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.9;
  double epsilon = 1e-8;
  double base_rate = 0.002;
  std::vector<int> schedule = {10, 30, 50, 70, 100};
  double decay = 0.5;
  double clip_threshold = 5.0;
  int total_epochs = 120;
};

/// base_rate * decay^(schedule points passed), with epochs counted from 1:
/// epochs 1..10 run at the base rate, the first decay applies from epoch 11.
double rate_for_epoch(const AdamConfig& config, int epoch);

/// Global-norm gradient clipping over the whole model. A NaN or infinite
/// gradient raises TrainingDivergenceError naming the tensor. Returns the
/// pre-clip norm.
double clip_gradients(Model& model, double threshold);

class AdamOptimizer {
 public:
  explicit AdamOptimizer(AdamConfig config) : config_(std::move(config)) {}

  const AdamConfig& config() const { return config_; }
  long long steps() const { return t_; }

  /// One update from the gradients currently stored in the model, at the
  /// learning rate for `epoch` (1-based).
  void step(Model& model, int epoch);

 private:
  struct Moments {
    Eigen::MatrixXd m;
    Eigen::MatrixXd v;
  };
  AdamConfig config_;
  long long t_ = 0;
  std::unordered_map<std::string, Moments> moments_;
};

/// Glorot init for matrices (per gate block for the stacked LSTM weights),
/// +-sqrt(3/dim) for embedding tables, zero biases except the forget gate at
/// 1.0. Pretrained vectors overwrite the rows of in-vocabulary words; their
/// width must equal word_dim.
void init_params(Model& model, std::mt19937_64& rng,
                 const PretrainedEmbeddings* pretrained = nullptr, const Vocab* vocab = nullptr);

enum class Objective { global_likelihood, cross_entropy };
enum class Ablation { basic, plus_char, plus_pos, full };

/// Applies an ablation to the encoder input blocks: basic = words only,
/// plus_char adds the character CNN, plus_pos adds POS embeddings, full both.
EncoderConfig apply_ablation(EncoderConfig config, Ablation ablation);

struct TrainConfig {
  Objective objective = Objective::global_likelihood;
  Ablation ablation = Ablation::full;
  int batch_size = 32;
  unsigned long long seed = 1;
  int dev_every = 1;
  std::string checkpoint_path;
  bool abort_on_invalid_tree = false;
  double unk_replace_prob = 0.5;
  int max_sentence_length = 0;  // 0 = unlimited
  bool single_root = false;
  PunctuationPolicy punct = PunctuationPolicy::include_all;
  AdamConfig adam;
};

struct EpochLog {
  int epoch = 0;
  double mean_loss = 0.0;
  double dev_uas = -1.0;
  double dev_las = -1.0;
  double lr = 0.0;
};

struct TrainResult {
  int best_epoch = 0;
  double best_dev_uas = -1.0;
  double best_dev_las = -1.0;
  std::vector<EpochLog> log;
};

/// Full training loop: shuffle, batched forward/backward, clip, Adam step,
/// per-epoch dev evaluation, best-dev-LAS model retention (UAS then earlier
/// epoch break ties). The best parameters are left in `model` on return; one
/// `epoch= loss= dev_uas= dev_las= lr=` line per epoch goes to `log_stream`
/// when given. Sentences whose gold structure is unusable are skipped with a
/// warning, or abort training when the config says so.
TrainResult train(Model& model, const Vocab& vocab, const std::vector<Sentence>& train_data,
                  const std::vector<Sentence>& dev_data, const TrainConfig& config,
                  std::ostream* log_stream = nullptr);

/// Inference over one sentence: encode, score, decode.
DependencyTree parse_sentence(const Model& model, const Vocab& vocab, const Sentence& sentence,
                              bool single_root);

/// Decode a corpus and return copies of `gold` with predicted HEAD/DEPREL.
std::vector<Sentence> parse_corpus(const Model& model, const Vocab& vocab,
                                   const std::vector<Sentence>& input, bool single_root);

std::string format_epoch_log(const EpochLog& entry);

}  // namespace neuromst
