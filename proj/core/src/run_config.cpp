#include "neuromst/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "neuromst/errors.hpp"

namespace neuromst {

namespace {

long long parse_int(const std::string& key, const std::string& text) {
  try {
    size_t used = 0;
    const long long value = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ConfigError("bad integer for " + key + ": '" + text + "'");
  }
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + key + ": '" + text + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError("bad boolean for " + key + ": '" + text + "' (use true/false)");
}

std::vector<int> parse_schedule(const std::string& key, const std::string& text) {
  std::vector<int> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(static_cast<int>(parse_int(key, item)));
  }
  return out;
}

std::string schedule_to_string(const std::vector<int>& schedule) {
  std::string out;
  for (size_t i = 0; i < schedule.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(schedule[i]);
  }
  return out;
}

std::string double_to_string(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace

bool RunConfig::operator==(const RunConfig& other) const {
  const EncoderConfig& a = encoder;
  const EncoderConfig& b = other.encoder;
  return train_path == other.train_path && dev_path == other.dev_path &&
         input_path == other.input_path && output_path == other.output_path &&
         embeddings_path == other.embeddings_path && model_path == other.model_path &&
         gold_path == other.gold_path && pred_path == other.pred_path &&
         a.word_dim == b.word_dim && a.char_dim == b.char_dim && a.pos_dim == b.pos_dim &&
         a.cnn_window == b.cnn_window && a.cnn_filters == b.cnn_filters &&
         a.lstm_layers == b.lstm_layers && a.lstm_state == b.lstm_state &&
         a.mlp_dim == b.mlp_dim && a.dropout_embed == b.dropout_embed &&
         a.dropout_hidden == b.dropout_hidden && a.dropout_layer == b.dropout_layer &&
         a.use_char == b.use_char && a.use_pos == b.use_pos && objective == other.objective &&
         ablation == other.ablation && batch_size == other.batch_size &&
         epochs == other.epochs && seed == other.seed && min_freq == other.min_freq &&
         unk_replace_prob == other.unk_replace_prob && dev_every == other.dev_every &&
         abort_on_invalid_tree == other.abort_on_invalid_tree &&
         max_sentence_length == other.max_sentence_length &&
         learning_rate == other.learning_rate && decay == other.decay && clip == other.clip &&
         schedule == other.schedule && single_root == other.single_root && punct == other.punct;
}

TrainConfig RunConfig::train_config() const {
  TrainConfig tc;
  tc.objective = objective;
  tc.ablation = ablation;
  tc.batch_size = batch_size;
  tc.seed = seed;
  tc.dev_every = dev_every;
  tc.checkpoint_path = model_path;
  tc.abort_on_invalid_tree = abort_on_invalid_tree;
  tc.unk_replace_prob = unk_replace_prob;
  tc.max_sentence_length = max_sentence_length;
  tc.single_root = single_root;
  tc.punct = punct;
  tc.adam.base_rate = learning_rate;
  tc.adam.decay = decay;
  tc.adam.clip_threshold = clip;
  tc.adam.schedule = schedule;
  tc.adam.total_epochs = epochs;
  return tc;
}

std::string to_string(Objective objective) {
  return objective == Objective::global_likelihood ? "global_likelihood" : "cross_entropy";
}

std::string to_string(Ablation ablation) {
  switch (ablation) {
    case Ablation::basic: return "basic";
    case Ablation::plus_char: return "plus_char";
    case Ablation::plus_pos: return "plus_pos";
    case Ablation::full: return "full";
  }
  return "full";
}

std::string to_string(PunctuationPolicy policy) {
  return policy == PunctuationPolicy::include_all ? "include_all" : "exclude_unicode_punct";
}

Objective objective_from_string(const std::string& text) {
  if (text == "global_likelihood") return Objective::global_likelihood;
  if (text == "cross_entropy") return Objective::cross_entropy;
  throw ConfigError("unknown objective '" + text +
                    "' (expected global_likelihood or cross_entropy)");
}

Ablation ablation_from_string(const std::string& text) {
  if (text == "basic") return Ablation::basic;
  if (text == "plus_char") return Ablation::plus_char;
  if (text == "plus_pos") return Ablation::plus_pos;
  if (text == "full") return Ablation::full;
  throw ConfigError("unknown ablation '" + text +
                    "' (expected basic, plus_char, plus_pos, or full)");
}

PunctuationPolicy punct_from_string(const std::string& text) {
  if (text == "include_all") return PunctuationPolicy::include_all;
  if (text == "exclude_unicode_punct") return PunctuationPolicy::exclude_unicode_punct;
  throw ConfigError("unknown punctuation policy '" + text +
                    "' (expected include_all or exclude_unicode_punct)");
}

void apply_setting(RunConfig& c, const std::string& assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("expected key=value, got '" + assignment + "'");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  if (key == "train") c.train_path = value;
  else if (key == "dev") c.dev_path = value;
  else if (key == "input") c.input_path = value;
  else if (key == "output") c.output_path = value;
  else if (key == "embeddings") c.embeddings_path = value;
  else if (key == "model") c.model_path = value;
  else if (key == "gold") c.gold_path = value;
  else if (key == "pred") c.pred_path = value;
  else if (key == "word_dim") c.encoder.word_dim = static_cast<int>(parse_int(key, value));
  else if (key == "char_dim") c.encoder.char_dim = static_cast<int>(parse_int(key, value));
  else if (key == "pos_dim") c.encoder.pos_dim = static_cast<int>(parse_int(key, value));
  else if (key == "cnn_window") c.encoder.cnn_window = static_cast<int>(parse_int(key, value));
  else if (key == "cnn_filters") c.encoder.cnn_filters = static_cast<int>(parse_int(key, value));
  else if (key == "lstm_layers") c.encoder.lstm_layers = static_cast<int>(parse_int(key, value));
  else if (key == "lstm_state") c.encoder.lstm_state = static_cast<int>(parse_int(key, value));
  else if (key == "mlp_dim") c.encoder.mlp_dim = static_cast<int>(parse_int(key, value));
  else if (key == "dropout_embed") c.encoder.dropout_embed = parse_double(key, value);
  else if (key == "dropout_hidden") c.encoder.dropout_hidden = parse_double(key, value);
  else if (key == "dropout_layer") c.encoder.dropout_layer = parse_double(key, value);
  else if (key == "objective") c.objective = objective_from_string(value);
  else if (key == "ablation") c.ablation = ablation_from_string(value);
  else if (key == "batch_size") c.batch_size = static_cast<int>(parse_int(key, value));
  else if (key == "epochs") c.epochs = static_cast<int>(parse_int(key, value));
  else if (key == "seed") c.seed = static_cast<unsigned long long>(parse_int(key, value));
  else if (key == "min_freq") c.min_freq = static_cast<int>(parse_int(key, value));
  else if (key == "unk_replace_prob") c.unk_replace_prob = parse_double(key, value);
  else if (key == "dev_every") c.dev_every = static_cast<int>(parse_int(key, value));
  else if (key == "abort_on_invalid_tree") c.abort_on_invalid_tree = parse_bool(key, value);
  else if (key == "max_sentence_length")
    c.max_sentence_length = static_cast<int>(parse_int(key, value));
  else if (key == "learning_rate") c.learning_rate = parse_double(key, value);
  else if (key == "decay") c.decay = parse_double(key, value);
  else if (key == "clip") c.clip = parse_double(key, value);
  else if (key == "schedule") c.schedule = parse_schedule(key, value);
  else if (key == "single_root") c.single_root = parse_bool(key, value);
  else if (key == "punctuation") c.punct = punct_from_string(value);
  else throw ConfigError("unknown config key '" + key + "'");
}

RunConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  RunConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const size_t last = line.find_last_not_of(" \t");
    try {
      apply_setting(config, line.substr(first, last - first + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

void echo_config(const RunConfig& c, std::ostream& out) {
  out << "train=" << c.train_path << '\n'
      << "dev=" << c.dev_path << '\n'
      << "input=" << c.input_path << '\n'
      << "output=" << c.output_path << '\n'
      << "embeddings=" << c.embeddings_path << '\n'
      << "model=" << c.model_path << '\n'
      << "gold=" << c.gold_path << '\n'
      << "pred=" << c.pred_path << '\n'
      << "word_dim=" << c.encoder.word_dim << '\n'
      << "char_dim=" << c.encoder.char_dim << '\n'
      << "pos_dim=" << c.encoder.pos_dim << '\n'
      << "cnn_window=" << c.encoder.cnn_window << '\n'
      << "cnn_filters=" << c.encoder.cnn_filters << '\n'
      << "lstm_layers=" << c.encoder.lstm_layers << '\n'
      << "lstm_state=" << c.encoder.lstm_state << '\n'
      << "mlp_dim=" << c.encoder.mlp_dim << '\n'
      << "dropout_embed=" << double_to_string(c.encoder.dropout_embed) << '\n'
      << "dropout_hidden=" << double_to_string(c.encoder.dropout_hidden) << '\n'
      << "dropout_layer=" << double_to_string(c.encoder.dropout_layer) << '\n'
      << "objective=" << to_string(c.objective) << '\n'
      << "ablation=" << to_string(c.ablation) << '\n'
      << "batch_size=" << c.batch_size << '\n'
      << "epochs=" << c.epochs << '\n'
      << "seed=" << c.seed << '\n'
      << "min_freq=" << c.min_freq << '\n'
      << "unk_replace_prob=" << double_to_string(c.unk_replace_prob) << '\n'
      << "dev_every=" << c.dev_every << '\n'
      << "abort_on_invalid_tree=" << (c.abort_on_invalid_tree ? "true" : "false") << '\n'
      << "max_sentence_length=" << c.max_sentence_length << '\n'
      << "learning_rate=" << double_to_string(c.learning_rate) << '\n'
      << "decay=" << double_to_string(c.decay) << '\n'
      << "clip=" << double_to_string(c.clip) << '\n'
      << "schedule=" << schedule_to_string(c.schedule) << '\n'
      << "single_root=" << (c.single_root ? "true" : "false") << '\n'
      << "punctuation=" << to_string(c.punct) << '\n';
}

}  // namespace neuromst
