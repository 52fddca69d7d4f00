#include "neuromst/encoder.hpp"

#include <cmath>
#include <string>

namespace neuromst {

namespace {

Eigen::VectorXd sigmoid(const Eigen::VectorXd& v) {
  return v.unaryExpr([](double x) { return 1.0 / (1.0 + std::exp(-x)); });
}

// Bernoulli keep-mask with inverted-dropout scaling; row-major fill order so
// a fixed seed reproduces exactly.
Eigen::MatrixXd bernoulli_mask(int rows, int cols, double p, std::mt19937_64& rng) {
  const double scale = 1.0 / (1.0 - p);
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = (unit_uniform(rng) < p) ? 0.0 : scale;
  }
  return m;
}

Eigen::VectorXd bernoulli_vec(int size, double p, std::mt19937_64& rng) {
  return bernoulli_mask(size, 1, p, rng).col(0);
}

int state_size(const LstmLayerParams& layer) {
  return static_cast<int>(layer.fwd.w_recur.value.cols());
}

// Forward scan of one direction over `input` rows (already in processing
// order). rmask, when present, multiplies the recurrent h path only.
void run_direction(const LstmDirection& w, const Eigen::MatrixXd& input,
                   const Eigen::VectorXd* rmask, LstmDirCache& cache) {
  const int t_len = static_cast<int>(input.rows());
  const int h_dim = static_cast<int>(w.w_recur.value.cols());
  if (input.cols() != w.w_input.value.cols()) {
    throw DimensionError("lstm input width " + std::to_string(input.cols()) +
                         " does not match weight width " + std::to_string(w.w_input.value.cols()));
  }

  cache.x = input;
  cache.hm.resize(t_len, h_dim);
  cache.h.resize(t_len, h_dim);
  cache.c.resize(t_len, h_dim);
  cache.gi.resize(t_len, h_dim);
  cache.gf.resize(t_len, h_dim);
  cache.gg.resize(t_len, h_dim);
  cache.go.resize(t_len, h_dim);

  const Eigen::MatrixXd a_in = input * w.w_input.value.transpose();  // T x 4H
  const Eigen::VectorXd vi = w.peep_in.value.col(0);
  const Eigen::VectorXd vf = w.peep_forget.value.col(0);
  const Eigen::VectorXd vo = w.peep_out.value.col(0);
  const Eigen::VectorXd bias = w.bias.value.col(0);

  Eigen::VectorXd h_prev = Eigen::VectorXd::Zero(h_dim);
  Eigen::VectorXd c_prev = Eigen::VectorXd::Zero(h_dim);
  for (int t = 0; t < t_len; ++t) {
    const Eigen::VectorXd hm = rmask ? h_prev.cwiseProduct(*rmask) : h_prev;
    cache.hm.row(t) = hm.transpose();
    const Eigen::VectorXd a = a_in.row(t).transpose() + w.w_recur.value * hm + bias;
    const Eigen::VectorXd i = sigmoid(a.segment(0, h_dim) + vi.cwiseProduct(c_prev));
    const Eigen::VectorXd f = sigmoid(a.segment(h_dim, h_dim) + vf.cwiseProduct(c_prev));
    const Eigen::VectorXd g = a.segment(2 * h_dim, h_dim).array().tanh();
    const Eigen::VectorXd c = f.cwiseProduct(c_prev) + i.cwiseProduct(g);
    const Eigen::VectorXd o = sigmoid(a.segment(3 * h_dim, h_dim) + vo.cwiseProduct(c));
    const Eigen::VectorXd h = o.cwiseProduct(c.array().tanh().matrix());

    cache.gi.row(t) = i.transpose();
    cache.gf.row(t) = f.transpose();
    cache.gg.row(t) = g.transpose();
    cache.go.row(t) = o.transpose();
    cache.c.row(t) = c.transpose();
    cache.h.row(t) = h.transpose();
    h_prev = h;
    c_prev = c;
  }
}

// Reverse scan matching run_direction; accumulates into w's grad buffers and
// returns the gradient on the input rows.
Eigen::MatrixXd direction_backward(LstmDirection& w, const Eigen::VectorXd* rmask,
                                   const LstmDirCache& cache, const Eigen::MatrixXd& grad_h) {
  const int t_len = static_cast<int>(cache.h.rows());
  const int h_dim = static_cast<int>(cache.h.cols());
  const Eigen::VectorXd vi = w.peep_in.value.col(0);
  const Eigen::VectorXd vf = w.peep_forget.value.col(0);
  const Eigen::VectorXd vo = w.peep_out.value.col(0);

  Eigen::MatrixXd da_all(t_len, 4 * h_dim);
  Eigen::VectorXd dh_rec = Eigen::VectorXd::Zero(h_dim);
  Eigen::VectorXd dc_next = Eigen::VectorXd::Zero(h_dim);
  for (int t = t_len - 1; t >= 0; --t) {
    const Eigen::VectorXd dh = grad_h.row(t).transpose() + dh_rec;
    const Eigen::VectorXd c_t = cache.c.row(t).transpose();
    const Eigen::VectorXd c_prev =
        (t > 0) ? Eigen::VectorXd(cache.c.row(t - 1).transpose()) : Eigen::VectorXd::Zero(h_dim);
    const Eigen::VectorXd i = cache.gi.row(t).transpose();
    const Eigen::VectorXd f = cache.gf.row(t).transpose();
    const Eigen::VectorXd g = cache.gg.row(t).transpose();
    const Eigen::VectorXd o = cache.go.row(t).transpose();
    const Eigen::ArrayXd tanh_c = c_t.array().tanh();

    const Eigen::ArrayXd da_o = dh.array() * tanh_c * o.array() * (1.0 - o.array());
    const Eigen::ArrayXd dc =
        dh.array() * o.array() * (1.0 - tanh_c.square()) + dc_next.array() + da_o * vo.array();
    w.peep_out.grad.col(0) += (da_o * c_t.array()).matrix();

    const Eigen::ArrayXd da_i = dc * g.array() * i.array() * (1.0 - i.array());
    const Eigen::ArrayXd da_f = dc * c_prev.array() * f.array() * (1.0 - f.array());
    const Eigen::ArrayXd da_g = dc * i.array() * (1.0 - g.array().square());
    w.peep_in.grad.col(0) += (da_i * c_prev.array()).matrix();
    w.peep_forget.grad.col(0) += (da_f * c_prev.array()).matrix();

    dc_next = (dc * f.array() + da_i * vi.array() + da_f * vf.array()).matrix();

    da_all.row(t).segment(0, h_dim) = da_i.matrix().transpose();
    da_all.row(t).segment(h_dim, h_dim) = da_f.matrix().transpose();
    da_all.row(t).segment(2 * h_dim, h_dim) = da_g.matrix().transpose();
    da_all.row(t).segment(3 * h_dim, h_dim) = da_o.matrix().transpose();

    dh_rec = w.w_recur.value.transpose() * da_all.row(t).transpose();
    if (rmask) dh_rec = dh_rec.cwiseProduct(*rmask);
  }
  w.w_input.grad += da_all.transpose() * cache.x;
  w.w_recur.grad += da_all.transpose() * cache.hm;
  w.bias.grad.col(0) += da_all.colwise().sum().transpose();
  return da_all * w.w_input.value;
}

const Eigen::VectorXd* vec_or_null(const std::vector<std::array<Eigen::VectorXd, 2>>& masks,
                                   std::size_t layer, int dir) {
  if (layer >= masks.size() || masks[layer][dir].size() == 0) return nullptr;
  return &masks[layer][dir];
}

Tensor make_tensor(const std::string& name, int rows, int cols) { return Tensor(name, rows, cols); }

}  // namespace

void EncoderConfig::validate() const {
  auto positive = [](int v, const char* what) {
    if (v < 1) throw ConfigError(std::string(what) + " must be at least 1, got " + std::to_string(v));
  };
  positive(word_dim, "word_dim");
  positive(cnn_window, "cnn_window");
  positive(lstm_layers, "lstm_layers");
  positive(lstm_state, "lstm_state");
  positive(mlp_dim, "mlp_dim");
  if (use_char) {
    positive(char_dim, "char_dim");
    positive(cnn_filters, "cnn_filters");
  }
  if (use_pos) positive(pos_dim, "pos_dim");
  for (double p : {dropout_embed, dropout_hidden, dropout_layer}) {
    if (p < 0.0 || p >= 1.0) {
      throw ConfigError("dropout rates must lie in [0,1), got " + std::to_string(p));
    }
  }
}

EncoderParams::EncoderParams(const EncoderConfig& cfg, int nw, int nc, int np)
    : config(cfg), num_words(nw), num_chars(nc), num_pos(np) {
  config.validate();
  if (num_words <= kRootId) {
    throw ConfigError("word table needs the reserved rows plus entries, got " +
                      std::to_string(num_words));
  }
  word_embeddings = make_tensor("encoder.word_emb", num_words, config.word_dim);
  if (config.use_char) {
    if (num_chars <= kUnkId) {
      throw ConfigError("char table needs the reserved rows, got " + std::to_string(num_chars));
    }
    char_cnn.emplace();
    char_cnn->embeddings = make_tensor("encoder.char_emb", num_chars, config.char_dim);
    char_cnn->filters = make_tensor("encoder.cnn_filters", config.cnn_filters,
                                    config.cnn_window * config.char_dim);
    char_cnn->bias = make_tensor("encoder.cnn_bias", config.cnn_filters, 1);
  }
  if (config.use_pos) {
    if (num_pos <= kRootId) {
      throw ConfigError("pos table needs the reserved rows, got " + std::to_string(num_pos));
    }
    pos_embeddings = make_tensor("encoder.pos_emb", num_pos, config.pos_dim);
  }
  const int h = config.lstm_state;
  for (int k = 0; k < config.lstm_layers; ++k) {
    const int in_dim = (k == 0) ? config.input_dim() : 2 * h;
    LstmLayerParams layer;
    const char* dir_names[2] = {"fwd", "bwd"};
    LstmDirection* dirs[2] = {&layer.fwd, &layer.bwd};
    for (int d = 0; d < 2; ++d) {
      const std::string base = "encoder.lstm" + std::to_string(k) + "." + dir_names[d] + ".";
      dirs[d]->w_input = make_tensor(base + "w_input", 4 * h, in_dim);
      dirs[d]->w_recur = make_tensor(base + "w_recur", 4 * h, h);
      dirs[d]->bias = make_tensor(base + "bias", 4 * h, 1);
      dirs[d]->peep_in = make_tensor(base + "peep_in", h, 1);
      dirs[d]->peep_forget = make_tensor(base + "peep_forget", h, 1);
      dirs[d]->peep_out = make_tensor(base + "peep_out", h, 1);
    }
    lstm.push_back(std::move(layer));
  }
  mlp_weight = make_tensor("encoder.mlp_w", config.mlp_dim, 2 * h);
  mlp_bias = make_tensor("encoder.mlp_b", config.mlp_dim, 1);
}

void EncoderParams::zero_grads() {
  visit([](Tensor& t) { t.zero_grad(); });
}

EncoderMasks sample_masks(const EncoderConfig& config, const TokenSeq& tokens,
                          std::mt19937_64& rng) {
  EncoderMasks m;
  const int t_len = static_cast<int>(tokens.size());
  if (config.use_char && config.dropout_embed > 0.0) {
    m.char_masks.reserve(tokens.size());
    for (const auto& tok : tokens) {
      const int padded = static_cast<int>(tok.chars.size()) + config.cnn_window - 1;
      m.char_masks.push_back(bernoulli_mask(padded, config.char_dim, config.dropout_embed, rng));
    }
  }
  if (config.dropout_embed > 0.0) {
    m.embed_mask = bernoulli_mask(t_len, config.input_dim(), config.dropout_embed, rng);
  }
  for (int k = 0; k < config.lstm_layers; ++k) {
    std::array<Eigen::VectorXd, 2> pair;
    if (config.dropout_hidden > 0.0) {
      pair[0] = bernoulli_vec(config.lstm_state, config.dropout_hidden, rng);
      pair[1] = bernoulli_vec(config.lstm_state, config.dropout_hidden, rng);
    }
    m.recur.push_back(std::move(pair));
    if (k > 0 && config.dropout_layer > 0.0) {
      m.layer_in.push_back(bernoulli_vec(2 * config.lstm_state, config.dropout_layer, rng));
    }
  }
  if (config.dropout_layer > 0.0) {
    m.output = bernoulli_vec(2 * config.lstm_state, config.dropout_layer, rng);
  }
  return m;
}

Eigen::VectorXd char_cnn_forward(const std::vector<int>& chars, const CharCnnParams& params,
                                 const EncoderConfig& config, const Eigen::MatrixXd* dropout_mask,
                                 CharCnnCache* cache) {
  if (chars.empty()) throw ConfigError("character sequence must be non-empty");
  const int window = config.cnn_window;
  const int cd = config.char_dim;
  const int nf = config.cnn_filters;
  const int rows = static_cast<int>(params.embeddings.value.rows());
  const int pad_left = (window - 1) / 2;
  const int pad_right = window - 1 - pad_left;
  const int padded = static_cast<int>(chars.size()) + window - 1;
  const int positions = static_cast<int>(chars.size());

  std::vector<int> ids;
  ids.reserve(padded);
  for (int j = 0; j < pad_left; ++j) ids.push_back(kPadId);
  for (int c : chars) ids.push_back((c < 0 || c >= rows) ? kUnkId : c);
  for (int j = 0; j < pad_right; ++j) ids.push_back(kPadId);

  Eigen::MatrixXd x(padded, cd);
  for (int j = 0; j < padded; ++j) x.row(j) = params.embeddings.value.row(ids[j]);
  if (dropout_mask) {
    if (dropout_mask->rows() != padded || dropout_mask->cols() != cd) {
      throw DimensionError("char dropout mask shape does not match the padded word");
    }
    x = x.cwiseProduct(*dropout_mask);
  }

  Eigen::MatrixXd windows(positions, window * cd);
  for (int t = 0; t < positions; ++t) {
    for (int w = 0; w < window; ++w) windows.row(t).segment(w * cd, cd) = x.row(t + w);
  }
  const Eigen::MatrixXd conv = windows * params.filters.value.transpose();  // positions x nf

  Eigen::VectorXd out(nf);
  std::vector<int> argmax(nf, 0);
  for (int f = 0; f < nf; ++f) {
    int best = 0;
    for (int t = 1; t < positions; ++t) {
      if (conv(t, f) > conv(best, f)) best = t;
    }
    argmax[f] = best;
    out(f) = conv(best, f) + params.bias.value(f, 0);
  }
  if (cache) {
    cache->padded_ids = std::move(ids);
    cache->embedded = std::move(x);
    cache->mask = dropout_mask ? *dropout_mask : Eigen::MatrixXd();
    cache->argmax = std::move(argmax);
  }
  return out;
}

void char_cnn_backward(CharCnnParams& params, const EncoderConfig& config,
                       const CharCnnCache& cache, const Eigen::VectorXd& grad_out) {
  const int window = config.cnn_window;
  const int cd = config.char_dim;
  const int nf = config.cnn_filters;
  const int padded = static_cast<int>(cache.embedded.rows());

  Eigen::MatrixXd dx = Eigen::MatrixXd::Zero(padded, cd);
  for (int f = 0; f < nf; ++f) {
    const double g = grad_out(f);
    if (g == 0.0) continue;
    const int t = cache.argmax[f];
    params.bias.grad(f, 0) += g;
    for (int w = 0; w < window; ++w) {
      params.filters.grad.row(f).segment(w * cd, cd) += g * cache.embedded.row(t + w);
      dx.row(t + w) += g * params.filters.value.row(f).segment(w * cd, cd);
    }
  }
  if (cache.mask.size() != 0) dx = dx.cwiseProduct(cache.mask);
  for (int j = 0; j < padded; ++j) params.embeddings.grad.row(cache.padded_ids[j]) += dx.row(j);
}

void lstm_cell_step(const LstmDirection& weights, const Eigen::VectorXd& x_t,
                    const Eigen::VectorXd& h_prev, const Eigen::VectorXd& c_prev,
                    Eigen::VectorXd& h_t, Eigen::VectorXd& c_t) {
  const int h_dim = static_cast<int>(weights.w_recur.value.cols());
  if (x_t.size() != weights.w_input.value.cols() || h_prev.size() != h_dim ||
      c_prev.size() != h_dim) {
    throw DimensionError("lstm step input shapes do not match the weights");
  }
  const Eigen::VectorXd a =
      weights.w_input.value * x_t + weights.w_recur.value * h_prev + weights.bias.value.col(0);
  const Eigen::VectorXd i =
      sigmoid(a.segment(0, h_dim) + weights.peep_in.value.col(0).cwiseProduct(c_prev));
  const Eigen::VectorXd f =
      sigmoid(a.segment(h_dim, h_dim) + weights.peep_forget.value.col(0).cwiseProduct(c_prev));
  const Eigen::VectorXd g = a.segment(2 * h_dim, h_dim).array().tanh();
  c_t = f.cwiseProduct(c_prev) + i.cwiseProduct(g);
  const Eigen::VectorXd o =
      sigmoid(a.segment(3 * h_dim, h_dim) + weights.peep_out.value.col(0).cwiseProduct(c_t));
  h_t = o.cwiseProduct(c_t.array().tanh().matrix());
}

Eigen::MatrixXd blstm_forward(const Eigen::MatrixXd& input,
                              const std::vector<LstmLayerParams>& layers,
                              const EncoderMasks* masks, BlstmCache* cache) {
  if (layers.empty()) throw ConfigError("blstm needs at least one layer");
  if (input.rows() < 1) throw DimensionError("blstm input must have at least one position");

  BlstmCache local;
  BlstmCache& cc = cache ? *cache : local;
  cc.layer_in.clear();
  cc.layer_out.clear();
  cc.dirs.assign(layers.size(), {});

  Eigen::MatrixXd x = input;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    if (k > 0 && masks && k - 1 < masks->layer_in.size() && masks->layer_in[k - 1].size() != 0) {
      x = x.array().rowwise() * masks->layer_in[k - 1].transpose().array();
    }
    cc.layer_in.push_back(x);
    const Eigen::VectorXd* rf = masks ? vec_or_null(masks->recur, k, 0) : nullptr;
    const Eigen::VectorXd* rb = masks ? vec_or_null(masks->recur, k, 1) : nullptr;
    run_direction(layers[k].fwd, x, rf, cc.dirs[k][0]);
    const Eigen::MatrixXd x_rev = x.colwise().reverse();
    run_direction(layers[k].bwd, x_rev, rb, cc.dirs[k][1]);

    const int h = state_size(layers[k]);
    Eigen::MatrixXd out(x.rows(), 2 * h);
    out.leftCols(h) = cc.dirs[k][0].h;
    out.rightCols(h) = cc.dirs[k][1].h.colwise().reverse();
    cc.layer_out.push_back(out);
    x = std::move(out);
  }
  return cc.layer_out.back();
}

SentenceRepr encode_sentence_masked(const TokenSeq& tokens, const EncoderParams& params,
                                    const EncoderMasks& masks, EncoderForward* cache) {
  const EncoderConfig& cfg = params.config;
  const int t_len = static_cast<int>(tokens.size());
  if (t_len < 2) throw ConfigError("a sentence needs the root plus at least one token");

  EncoderForward local;
  EncoderForward& cc = cache ? *cache : local;
  cc = EncoderForward{};
  cc.tokens = tokens;
  cc.masks = masks;

  const int d0 = cfg.input_dim();
  cc.concat.resize(t_len, d0);
  if (cfg.use_char) cc.char_cache.resize(t_len);
  for (int i = 0; i < t_len; ++i) {
    const EncodedToken& tok = tokens[i];
    if (tok.word < 0 || tok.word >= params.num_words) {
      throw VocabError("word id " + std::to_string(tok.word) + " outside table of " +
                       std::to_string(params.num_words));
    }
    int col = 0;
    cc.concat.row(i).segment(col, cfg.word_dim) = params.word_embeddings.value.row(tok.word);
    col += cfg.word_dim;
    if (cfg.use_char) {
      const Eigen::MatrixXd* cm =
          (static_cast<std::size_t>(i) < masks.char_masks.size() && masks.char_masks[i].size() != 0)
              ? &masks.char_masks[i]
              : nullptr;
      const Eigen::VectorXd cv =
          char_cnn_forward(tok.chars, *params.char_cnn, cfg, cm, &cc.char_cache[i]);
      cc.concat.row(i).segment(col, cfg.cnn_filters) = cv.transpose();
      col += cfg.cnn_filters;
    }
    if (cfg.use_pos) {
      if (tok.pos < 0 || tok.pos >= params.num_pos) {
        throw VocabError("pos id " + std::to_string(tok.pos) + " outside table of " +
                         std::to_string(params.num_pos));
      }
      cc.concat.row(i).segment(col, cfg.pos_dim) = params.pos_embeddings->value.row(tok.pos);
    }
  }

  cc.embedded =
      (masks.embed_mask.size() != 0) ? cc.concat.cwiseProduct(masks.embed_mask) : cc.concat;
  const Eigen::MatrixXd blstm_out = blstm_forward(cc.embedded, params.lstm, &masks, &cc.blstm);
  cc.blstm_dropped = (masks.output.size() != 0)
                         ? (blstm_out.array().rowwise() * masks.output.transpose().array()).matrix()
                         : blstm_out;
  cc.mlp_pre = (cc.blstm_dropped * params.mlp_weight.value.transpose()).rowwise() +
               params.mlp_bias.value.col(0).transpose();

  SentenceRepr repr;
  repr.phi = cc.mlp_pre.unaryExpr([](double z) { return elu(z); });
  cc.valid = true;
  return repr;
}

SentenceRepr encode_sentence(const TokenSeq& tokens, const EncoderParams& params, bool training,
                             std::mt19937_64& rng, EncoderForward* cache) {
  EncoderMasks masks;
  if (training) masks = sample_masks(params.config, tokens, rng);
  return encode_sentence_masked(tokens, params, masks, cache);
}

void encoder_backward(const EncoderForward& cache, EncoderParams& params,
                      const Eigen::MatrixXd& grad_repr) {
  if (!cache.valid) throw ConfigError("encoder backward requires the cache of a forward call");
  if (grad_repr.rows() != cache.mlp_pre.rows() || grad_repr.cols() != cache.mlp_pre.cols()) {
    throw DimensionError("representation gradient shape does not match the forward pass");
  }
  const EncoderConfig& cfg = params.config;
  const int h = cfg.lstm_state;
  const int t_len = static_cast<int>(cache.concat.rows());

  const Eigen::MatrixXd dz =
      grad_repr.cwiseProduct(cache.mlp_pre.unaryExpr([](double z) { return elu_grad(z); }));
  params.mlp_weight.grad += dz.transpose() * cache.blstm_dropped;
  params.mlp_bias.grad.col(0) += dz.colwise().sum().transpose();

  Eigen::MatrixXd dlayer = dz * params.mlp_weight.value;  // grad on blstm_dropped
  if (cache.masks.output.size() != 0) {
    dlayer = dlayer.array().rowwise() * cache.masks.output.transpose().array();
  }

  Eigen::MatrixXd dembedded;
  for (int k = static_cast<int>(params.lstm.size()) - 1; k >= 0; --k) {
    const Eigen::MatrixXd grad_fwd = dlayer.leftCols(h);
    const Eigen::MatrixXd grad_bwd = dlayer.rightCols(h).colwise().reverse();
    const Eigen::VectorXd* rf = vec_or_null(cache.masks.recur, k, 0);
    const Eigen::VectorXd* rb = vec_or_null(cache.masks.recur, k, 1);
    Eigen::MatrixXd dx = direction_backward(params.lstm[k].fwd, rf, cache.blstm.dirs[k][0], grad_fwd);
    dx += direction_backward(params.lstm[k].bwd, rb, cache.blstm.dirs[k][1], grad_bwd)
              .colwise()
              .reverse();
    if (k > 0) {
      if (static_cast<std::size_t>(k - 1) < cache.masks.layer_in.size() &&
          cache.masks.layer_in[k - 1].size() != 0) {
        dx = dx.array().rowwise() * cache.masks.layer_in[k - 1].transpose().array();
      }
      dlayer = std::move(dx);
    } else {
      dembedded = std::move(dx);
    }
  }

  const Eigen::MatrixXd dconcat = (cache.masks.embed_mask.size() != 0)
                                      ? dembedded.cwiseProduct(cache.masks.embed_mask)
                                      : dembedded;
  for (int i = 0; i < t_len; ++i) {
    const EncodedToken& tok = cache.tokens[i];
    int col = 0;
    params.word_embeddings.grad.row(tok.word) += dconcat.row(i).segment(col, cfg.word_dim);
    col += cfg.word_dim;
    if (cfg.use_char) {
      const Eigen::VectorXd gchar = dconcat.row(i).segment(col, cfg.cnn_filters).transpose();
      char_cnn_backward(*params.char_cnn, cfg, cache.char_cache[i], gchar);
      col += cfg.cnn_filters;
    }
    if (cfg.use_pos) {
      params.pos_embeddings->grad.row(tok.pos) += dconcat.row(i).segment(col, cfg.pos_dim);
    }
  }
}

}  // namespace neuromst
