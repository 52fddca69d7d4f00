#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "neuromst/errors.hpp"
#include "neuromst/params.hpp"
#include "neuromst/scorer.hpp"

namespace neuromst {

/// Reserved rows shared by every lookup table (words, characters, POS tags).
inline constexpr int kPadId = 0;
inline constexpr int kUnkId = 1;
inline constexpr int kRootId = 2;

struct EncoderConfig {
  int word_dim = 100;
  int char_dim = 50;
  int pos_dim = 50;
  int cnn_window = 3;
  int cnn_filters = 50;
  int lstm_layers = 2;
  int lstm_state = 256;
  int mlp_dim = 100;
  double dropout_embed = 0.15;
  double dropout_hidden = 0.25;  // recurrent state
  double dropout_layer = 0.33;   // between stacked layers and on the final output
  bool use_char = true;
  bool use_pos = true;

  int input_dim() const {
    return word_dim + (use_char ? cnn_filters : 0) + (use_pos ? pos_dim : 0);
  }
  void validate() const;
};

/// A token after vocabulary lookup; index 0 of a TokenSeq is the root symbol.
struct EncodedToken {
  int word = kUnkId;
  std::vector<int> chars;
  int pos = kUnkId;
};
using TokenSeq = std::vector<EncodedToken>;

struct CharCnnParams {
  Tensor embeddings;  // num_chars x char_dim
  Tensor filters;     // cnn_filters x (window * char_dim), window-major layout
  Tensor bias;        // cnn_filters x 1
};

/// One LSTM direction. Gate blocks are stacked in the row order
/// [input, forget, candidate, output]; the input and forget gates peek at the
/// previous cell state, the output gate at the current one (Hadamard vectors).
struct LstmDirection {
  Tensor w_input;      // 4H x in_dim
  Tensor w_recur;      // 4H x H
  Tensor bias;         // 4H x 1
  Tensor peep_in;      // H x 1
  Tensor peep_forget;  // H x 1
  Tensor peep_out;     // H x 1
};

struct LstmLayerParams {
  LstmDirection fwd;
  LstmDirection bwd;
};

struct EncoderParams {
  EncoderParams(const EncoderConfig& cfg, int num_words, int num_chars, int num_pos);

  EncoderConfig config;
  int num_words;
  int num_chars;
  int num_pos;

  Tensor word_embeddings;  // num_words x word_dim
  std::optional<CharCnnParams> char_cnn;
  std::optional<Tensor> pos_embeddings;  // num_pos x pos_dim
  std::vector<LstmLayerParams> lstm;
  Tensor mlp_weight;  // mlp_dim x 2H
  Tensor mlp_bias;    // mlp_dim x 1

  template <class F>
  void visit(F&& fn) {
    fn(word_embeddings);
    if (char_cnn) {
      fn(char_cnn->embeddings);
      fn(char_cnn->filters);
      fn(char_cnn->bias);
    }
    if (pos_embeddings) fn(*pos_embeddings);
    for (auto& layer : lstm) {
      for (LstmDirection* dir : {&layer.fwd, &layer.bwd}) {
        fn(dir->w_input);
        fn(dir->w_recur);
        fn(dir->bias);
        fn(dir->peep_in);
        fn(dir->peep_forget);
        fn(dir->peep_out);
      }
    }
    fn(mlp_weight);
    fn(mlp_bias);
  }
  template <class F>
  void visit(F&& fn) const {
    const_cast<EncoderParams*>(this)->visit([&](Tensor& t) { fn(static_cast<const Tensor&>(t)); });
  }
  void zero_grads();
};

/// Dropout masks for one sentence, pre-scaled by 1/(1-p) (inverted dropout).
/// Empty members mean identity. Character and embedding masks are elementwise;
/// the recurrent, inter-layer, and output masks are variational: one vector
/// per sequence, reused at every timestep.
struct EncoderMasks {
  std::vector<Eigen::MatrixXd> char_masks;                // per token, padded_len x char_dim
  Eigen::MatrixXd embed_mask;                             // T x input_dim
  std::vector<std::array<Eigen::VectorXd, 2>> recur;      // per layer {fwd, bwd}, H
  std::vector<Eigen::VectorXd> layer_in;                  // per boundary (layers-1), 2H
  Eigen::VectorXd output;                                 // 2H
};

EncoderMasks sample_masks(const EncoderConfig& config, const TokenSeq& tokens,
                          std::mt19937_64& rng);

struct CharCnnCache {
  std::vector<int> padded_ids;  // after UNK mapping, PAD on both flanks
  Eigen::MatrixXd embedded;     // padded_len x char_dim, after the mask
  Eigen::MatrixXd mask;         // empty = identity
  std::vector<int> argmax;      // winning window start per filter
};

/// Character ids -> cnn_filters vector: embed, mask, convolve with the
/// configured window over a PAD-embedded flank on each side, max-pool over
/// positions. Out-of-range ids fall back to the UNK row.
Eigen::VectorXd char_cnn_forward(const std::vector<int>& chars, const CharCnnParams& params,
                                 const EncoderConfig& config,
                                 const Eigen::MatrixXd* dropout_mask = nullptr,
                                 CharCnnCache* cache = nullptr);

/// grad flows back from grad_out through the pooled positions; accumulates
/// into params' grad buffers (embedding rows via the cached mask).
void char_cnn_backward(CharCnnParams& params, const EncoderConfig& config,
                       const CharCnnCache& cache, const Eigen::VectorXd& grad_out);

/// One peephole LSTM step. No dropout here; callers mask h_prev themselves.
void lstm_cell_step(const LstmDirection& weights, const Eigen::VectorXd& x_t,
                    const Eigen::VectorXd& h_prev, const Eigen::VectorXd& c_prev,
                    Eigen::VectorXd& h_t, Eigen::VectorXd& c_t);

struct LstmDirCache {
  Eigen::MatrixXd x;   // T x in, the rows actually fed (processing order)
  Eigen::MatrixXd hm;  // T x H, masked previous state used at each step
  Eigen::MatrixXd h;   // T x H
  Eigen::MatrixXd c;   // T x H
  Eigen::MatrixXd gi, gf, gg, go;  // T x H activated gates
};

struct BlstmCache {
  std::vector<Eigen::MatrixXd> layer_in;               // actual input per layer
  std::vector<std::array<LstmDirCache, 2>> dirs;       // per layer {fwd, bwd}
  std::vector<Eigen::MatrixXd> layer_out;              // T x 2H concat per layer
};

/// Stacked bidirectional pass. Rows of input are timesteps; the output
/// concatenates forward and backward states per position. The backward
/// direction runs on the reversed rows internally.
Eigen::MatrixXd blstm_forward(const Eigen::MatrixXd& input,
                              const std::vector<LstmLayerParams>& layers,
                              const EncoderMasks* masks = nullptr, BlstmCache* cache = nullptr);

/// Everything encode_sentence needs to replay exactly for the reverse pass.
struct EncoderForward {
  bool valid = false;
  TokenSeq tokens;
  EncoderMasks masks;
  std::vector<CharCnnCache> char_cache;
  Eigen::MatrixXd concat;    // T x input_dim, before the embedding mask
  Eigen::MatrixXd embedded;  // after it
  BlstmCache blstm;
  Eigen::MatrixXd blstm_dropped;  // T x 2H, after the output mask
  Eigen::MatrixXd mlp_pre;        // T x mlp_dim, before elu
};

/// Full token pipeline: embeddings (+char CNN, +POS) -> embedding dropout ->
/// stacked BLSTM with variational dropout -> one-layer MLP with elu.
/// With training=false no mask is sampled and the output is deterministic.
SentenceRepr encode_sentence(const TokenSeq& tokens, const EncoderParams& params, bool training,
                             std::mt19937_64& rng, EncoderForward* cache = nullptr);

/// Same pipeline under caller-supplied masks (fixed-noise evaluations).
SentenceRepr encode_sentence_masked(const TokenSeq& tokens, const EncoderParams& params,
                                    const EncoderMasks& masks, EncoderForward* cache = nullptr);

/// Accumulates d(loss)/d(every parameter) into params' grad buffers given
/// d(loss)/d(repr.phi). Needs the cache of the matching forward call.
void encoder_backward(const EncoderForward& cache, EncoderParams& params,
                      const Eigen::MatrixXd& grad_repr);

inline double elu(double x) { return x >= 0.0 ? x : std::exp(x) - 1.0; }
inline double elu_grad(double x) { return x >= 0.0 ? 1.0 : std::exp(x); }

}  // namespace neuromst
