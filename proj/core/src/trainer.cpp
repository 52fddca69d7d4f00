#include "neuromst/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <unordered_map>

#include "neuromst/decoder.hpp"
#include "neuromst/tree_crf.hpp"

namespace neuromst {

double rate_for_epoch(const AdamConfig& config, int epoch) {
  int passed = 0;
  for (int e : config.schedule) {
    if (e < epoch) ++passed;
  }
  return config.base_rate * std::pow(config.decay, passed);
}

double clip_gradients(Model& model, double threshold) {
  double sum_sq = 0.0;
  model.visit([&](Tensor& t) {
    if (!t.grad.allFinite()) {
      throw TrainingDivergenceError("gradient of " + t.name + " is not finite");
    }
    sum_sq += t.grad.squaredNorm();
  });
  const double norm = std::sqrt(sum_sq);
  if (norm > threshold && norm > 0.0) {
    const double scale = threshold / norm;
    model.visit([&](Tensor& t) { t.grad *= scale; });
  }
  return norm;
}

void AdamOptimizer::step(Model& model, int epoch) {
  ++t_;
  const double rate = rate_for_epoch(config_, epoch);
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  model.visit([&](Tensor& t) {
    Moments& mo = moments_[t.name];
    if (mo.m.size() == 0) {
      mo.m = Eigen::MatrixXd::Zero(t.value.rows(), t.value.cols());
      mo.v = Eigen::MatrixXd::Zero(t.value.rows(), t.value.cols());
    }
    mo.m = config_.beta1 * mo.m + (1.0 - config_.beta1) * t.grad;
    mo.v = config_.beta2 * mo.v + (1.0 - config_.beta2) * t.grad.cwiseProduct(t.grad);
    const Eigen::MatrixXd m_hat = mo.m / bc1;
    const Eigen::MatrixXd v_hat = mo.v / bc2;
    t.value.array() -= rate * m_hat.array() / (v_hat.array().sqrt() + config_.epsilon);
  });
}

namespace {

void fill_uniform(Eigen::MatrixXd& m, double half_width, std::mt19937_64& rng) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = symmetric_uniform(rng, half_width);
  }
}

double glorot(Eigen::Index rows, Eigen::Index cols) {
  return std::sqrt(6.0 / static_cast<double>(rows + cols));
}

void init_lstm_direction(LstmDirection& dir, int h, std::mt19937_64& rng) {
  // Stacked gate weights draw per-block ranges as if stored separately.
  const Eigen::Index in = dir.w_input.value.cols();
  for (int gate = 0; gate < 4; ++gate) {
    Eigen::MatrixXd block = dir.w_input.value.middleRows(gate * h, h);
    fill_uniform(block, glorot(h, in), rng);
    dir.w_input.value.middleRows(gate * h, h) = block;
  }
  for (int gate = 0; gate < 4; ++gate) {
    Eigen::MatrixXd block = dir.w_recur.value.middleRows(gate * h, h);
    fill_uniform(block, glorot(h, h), rng);
    dir.w_recur.value.middleRows(gate * h, h) = block;
  }
  dir.bias.value.setZero();
  dir.bias.value.col(0).segment(h, h).setOnes();  // forget gate
  fill_uniform(dir.peep_in.value, glorot(h, 1), rng);
  fill_uniform(dir.peep_forget.value, glorot(h, 1), rng);
  fill_uniform(dir.peep_out.value, glorot(h, 1), rng);
}

}  // namespace

void init_params(Model& model, std::mt19937_64& rng, const PretrainedEmbeddings* pretrained,
                 const Vocab* vocab) {
  EncoderParams& enc = model.encoder;
  const EncoderConfig& cfg = enc.config;

  fill_uniform(enc.word_embeddings.value, std::sqrt(3.0 / cfg.word_dim), rng);
  if (enc.char_cnn) {
    fill_uniform(enc.char_cnn->embeddings.value, std::sqrt(3.0 / cfg.char_dim), rng);
    fill_uniform(enc.char_cnn->filters.value,
                 glorot(enc.char_cnn->filters.value.rows(), enc.char_cnn->filters.value.cols()),
                 rng);
    enc.char_cnn->bias.value.setZero();
  }
  if (enc.pos_embeddings) {
    fill_uniform(enc.pos_embeddings->value, std::sqrt(3.0 / cfg.pos_dim), rng);
  }
  for (LstmLayerParams& layer : enc.lstm) {
    init_lstm_direction(layer.fwd, cfg.lstm_state, rng);
    init_lstm_direction(layer.bwd, cfg.lstm_state, rng);
  }
  fill_uniform(enc.mlp_weight.value, glorot(enc.mlp_weight.value.rows(), enc.mlp_weight.value.cols()),
               rng);
  enc.mlp_bias.value.setZero();

  ScorerParams& sc = model.scorer;
  for (int l = 0; l < sc.labels(); ++l) {
    fill_uniform(sc.w[l].value, glorot(sc.dim(), sc.dim()), rng);
    fill_uniform(sc.u[l].value, glorot(sc.dim(), 1), rng);
    fill_uniform(sc.v[l].value, glorot(sc.dim(), 1), rng);
    sc.b[l].value.setZero();
  }

  if (pretrained) {
    if (!vocab) throw ConfigError("pretrained embeddings need the vocabulary to map rows");
    if (pretrained->dim() != cfg.word_dim) {
      throw ConfigError("pretrained dimension " + std::to_string(pretrained->dim()) +
                        " does not match word_dim " + std::to_string(cfg.word_dim));
    }
    std::unordered_map<std::string, int> row_of;
    for (std::size_t r = 0; r < pretrained->words.size(); ++r) {
      row_of.emplace(normalize_form(pretrained->words[r]), static_cast<int>(r));
    }
    for (std::size_t id = 0; id < vocab->words.size(); ++id) {
      const auto it = row_of.find(vocab->words[id]);
      if (it != row_of.end()) {
        enc.word_embeddings.value.row(static_cast<Eigen::Index>(id)) =
            pretrained->vectors.row(it->second);
      }
    }
  }

  model.zero_grads();
}

EncoderConfig apply_ablation(EncoderConfig config, Ablation ablation) {
  switch (ablation) {
    case Ablation::basic:
      config.use_char = false;
      config.use_pos = false;
      break;
    case Ablation::plus_char:
      config.use_char = true;
      config.use_pos = false;
      break;
    case Ablation::plus_pos:
      config.use_char = false;
      config.use_pos = true;
      break;
    case Ablation::full:
      config.use_char = true;
      config.use_pos = true;
      break;
  }
  return config;
}

namespace {

struct Prepared {
  TokenSeq tokens;
  DependencyTree gold;
};

std::vector<Eigen::MatrixXd> snapshot_values(const Model& model) {
  std::vector<Eigen::MatrixXd> values;
  model.visit([&](const Tensor& t) { values.push_back(t.value); });
  return values;
}

void restore_values(Model& model, const std::vector<Eigen::MatrixXd>& values) {
  std::size_t i = 0;
  model.visit([&](Tensor& t) { t.value = values[i++]; });
}

}  // namespace

std::string format_epoch_log(const EpochLog& e) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "epoch=%d loss=%.6f dev_uas=%.4f dev_las=%.4f lr=%.8g", e.epoch,
                e.mean_loss, e.dev_uas, e.dev_las, e.lr);
  return buf;
}

DependencyTree parse_sentence(const Model& model, const Vocab& vocab, const Sentence& sentence,
                              bool single_root) {
  std::mt19937_64 unused_rng(0);
  const TokenSeq tokens = encode_tokens(sentence, vocab);
  const SentenceRepr repr = encode_sentence(tokens, model.encoder, false, unused_rng);
  const EdgeScores scores = score_all_edges(repr, model.scorer);
  return decode(scores, single_root);
}

std::vector<Sentence> parse_corpus(const Model& model, const Vocab& vocab,
                                   const std::vector<Sentence>& input, bool single_root) {
  std::vector<Sentence> out;
  out.reserve(input.size());
  for (const Sentence& s : input) {
    Sentence pred = s;
    const DependencyTree tree = parse_sentence(model, vocab, s, single_root);
    for (int m = 1; m <= s.n(); ++m) {
      pred.tokens[m].head = tree.head[m];
      pred.tokens[m].deprel = vocab.labels[tree.label[m]];
    }
    out.push_back(std::move(pred));
  }
  return out;
}

TrainResult train(Model& model, const Vocab& vocab, const std::vector<Sentence>& train_data,
                  const std::vector<Sentence>& dev_data, const TrainConfig& config,
                  std::ostream* log_stream) {
  if (train_data.empty()) throw ConfigError("training set is empty");
  if (config.batch_size < 1) throw ConfigError("batch size must be at least 1");

  std::vector<Prepared> prepared;
  prepared.reserve(train_data.size());
  for (std::size_t si = 0; si < train_data.size(); ++si) {
    const Sentence& s = train_data[si];
    if (config.max_sentence_length > 0 && s.n() > config.max_sentence_length) {
      if (log_stream) {
        *log_stream << "warning: skipping sentence " << (si + 1) << ": length " << s.n()
                    << " exceeds cap " << config.max_sentence_length << "\n";
      }
      continue;
    }
    try {
      Prepared p{encode_tokens(s, vocab), gold_tree(s, vocab)};
      prepared.push_back(std::move(p));
    } catch (const Error& e) {
      if (config.abort_on_invalid_tree) throw;
      if (log_stream) {
        *log_stream << "warning: skipping sentence " << (si + 1) << ": " << e.what() << "\n";
      }
    }
  }
  if (prepared.empty()) throw ConfigError("no usable training sentences after filtering");

  std::mt19937_64 rng(config.seed);
  AdamOptimizer optimizer(config.adam);

  TrainResult result;
  std::vector<Eigen::MatrixXd> best_values;
  double last_dev_uas = -1.0;
  double last_dev_las = -1.0;

  std::vector<std::size_t> order(prepared.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 1; epoch <= config.adam.total_epochs; ++epoch) {
    // Fisher-Yates with our own uniform draws, so shuffles reproduce across
    // standard libraries.
    for (std::size_t i = order.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(i));
      std::swap(order[i - 1], order[j < i ? j : i - 1]);
    }

    double epoch_loss = 0.0;
    long long seen = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      model.zero_grads();
      for (std::size_t k = start; k < stop; ++k) {
        const Prepared& p = prepared[order[k]];
        TokenSeq tokens = p.tokens;
        if (config.unk_replace_prob > 0.0) {
          for (std::size_t i = 1; i < tokens.size(); ++i) {
            if (vocab.is_singleton(tokens[i].word) &&
                unit_uniform(rng) < config.unk_replace_prob) {
              tokens[i].word = kUnkId;
            }
          }
        }
        EncoderForward cache;
        const SentenceRepr repr = encode_sentence(tokens, model.encoder, true, rng, &cache);
        const EdgeScores scores = score_all_edges(repr, model.scorer);
        const LossAndGrad lg = (config.objective == Objective::global_likelihood)
                                   ? nll_loss_and_grad(scores, p.gold)
                                   : head_selection_loss(scores, p.gold);
        if (!std::isfinite(lg.loss)) {
          throw TrainingDivergenceError("loss diverged at epoch " + std::to_string(epoch));
        }
        const Eigen::MatrixXd grad_repr = score_backward(repr, model.scorer, lg.grad);
        encoder_backward(cache, model.encoder, grad_repr);
        epoch_loss += lg.loss;
        ++seen;
      }
      const double inv_batch = 1.0 / static_cast<double>(stop - start);
      model.visit([&](Tensor& t) { t.grad *= inv_batch; });
      clip_gradients(model, config.adam.clip_threshold);
      optimizer.step(model, epoch);
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.mean_loss = epoch_loss / static_cast<double>(seen);
    entry.lr = rate_for_epoch(config.adam, epoch);

    const bool eval_now =
        !dev_data.empty() &&
        (config.dev_every <= 1 || epoch % config.dev_every == 0 || epoch == config.adam.total_epochs);
    if (eval_now) {
      const std::vector<Sentence> preds =
          parse_corpus(model, vocab, dev_data, config.single_root);
      const EvalResult ev = evaluate(dev_data, preds, config.punct);
      last_dev_uas = ev.uas;
      last_dev_las = ev.las;
      const bool better = ev.las > result.best_dev_las ||
                          (ev.las == result.best_dev_las && ev.uas > result.best_dev_uas);
      if (better) {
        result.best_epoch = epoch;
        result.best_dev_las = ev.las;
        result.best_dev_uas = ev.uas;
        best_values = snapshot_values(model);
      }
    }
    entry.dev_uas = last_dev_uas;
    entry.dev_las = last_dev_las;
    result.log.push_back(entry);
    if (log_stream) *log_stream << format_epoch_log(entry) << "\n";
  }

  if (!best_values.empty()) {
    restore_values(model, best_values);
  } else {
    result.best_epoch = config.adam.total_epochs;
  }
  return result;
}

}  // namespace neuromst
