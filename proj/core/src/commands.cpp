#include "neuromst/commands.hpp"

#include <cstdio>
#include <memory>
#include <ostream>
#include <random>

#include "neuromst/checkpoint.hpp"
#include "neuromst/errors.hpp"

namespace neuromst {

namespace {

std::string scores_line(double uas, double las) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "uas=%.4f las=%.4f", uas, las);
  return buf;
}

}  // namespace

void run_train(const RunConfig& config, std::ostream& out, std::ostream& log) {
  if (config.train_path.empty()) throw ConfigError("train path is required");
  if (config.dev_path.empty()) throw ConfigError("dev path is required");

  const std::vector<Sentence> train_data = read_conllx_file(config.train_path);
  const std::vector<Sentence> dev_data = read_conllx_file(config.dev_path);
  if (train_data.empty()) throw ConfigError("training file has no sentences: " + config.train_path);

  std::unique_ptr<PretrainedEmbeddings> pretrained;
  if (!config.embeddings_path.empty()) {
    pretrained = std::make_unique<PretrainedEmbeddings>(
        load_pretrained_embeddings(config.embeddings_path));
  }

  const Vocab vocab =
      build_vocab(train_data, pretrained ? &pretrained->words : nullptr, config.min_freq);

  EncoderConfig enc = apply_ablation(config.encoder, config.ablation);
  enc.validate();

  Model model(enc, static_cast<int>(vocab.words.size()), static_cast<int>(vocab.chars.size()),
              static_cast<int>(vocab.pos_tags.size()), vocab.num_labels());
  std::mt19937_64 rng(config.seed);
  init_params(model, rng, pretrained.get(), &vocab);

  log << "# config\n";
  echo_config(config, log);
  log << "# training: " << train_data.size() << " train / " << dev_data.size()
      << " dev sentences, " << vocab.words.size() << " words, " << vocab.num_labels()
      << " labels\n";

  const TrainResult result = train(model, vocab, train_data, dev_data, config.train_config(), &log);

  if (!config.model_path.empty()) {
    TrainMeta meta;
    meta.objective = to_string(config.objective);
    meta.ablation = to_string(config.ablation);
    meta.seed = config.seed;
    meta.best_epoch = result.best_epoch;
    meta.best_dev_uas = result.best_dev_uas;
    meta.best_dev_las = result.best_dev_las;
    save_checkpoint(config.model_path, model, vocab, meta, result.log);
    log << "# saved " << config.model_path << "\n";
  }

  char buf[96];
  std::snprintf(buf, sizeof(buf), "best_epoch=%d best_dev_uas=%.4f best_dev_las=%.4f",
                result.best_epoch, result.best_dev_uas, result.best_dev_las);
  out << buf << "\n";
}

void run_parse(const RunConfig& config, std::ostream& out, std::ostream& log) {
  if (config.model_path.empty()) throw ConfigError("model path is required");
  if (config.input_path.empty()) throw ConfigError("input path is required");

  const LoadedCheckpoint loaded = load_checkpoint(config.model_path);
  const std::vector<Sentence> input = read_conllx_file(config.input_path);
  const std::vector<Sentence> parsed =
      parse_corpus(loaded.model, loaded.vocab, input, config.single_root);

  if (config.output_path.empty()) {
    write_conllx(out, parsed);
  } else {
    write_conllx_file(config.output_path, parsed);
    log << "# wrote " << parsed.size() << " sentences to " << config.output_path << "\n";
  }
}

void run_eval(const RunConfig& config, std::ostream& out, std::ostream& /*log*/) {
  if (config.gold_path.empty()) throw ConfigError("gold path is required");
  if (config.pred_path.empty()) throw ConfigError("pred path is required");

  const std::vector<Sentence> gold = read_conllx_file(config.gold_path);
  const std::vector<Sentence> pred = read_conllx_file(config.pred_path);
  const EvalResult result = evaluate(gold, pred, config.punct);
  out << scores_line(result.uas, result.las) << "\n";
}

void run_inspect(const RunConfig& config, std::ostream& out, std::ostream& /*log*/) {
  if (config.model_path.empty()) throw ConfigError("model path is required");

  const LoadedCheckpoint loaded = load_checkpoint(config.model_path);
  const EncoderConfig& enc = loaded.config;

  out << "objective=" << loaded.meta.objective << "\n"
      << "ablation=" << loaded.meta.ablation << "\n"
      << "seed=" << loaded.meta.seed << "\n"
      << "word_dim=" << enc.word_dim << "\n"
      << "char_dim=" << enc.char_dim << "\n"
      << "pos_dim=" << enc.pos_dim << "\n"
      << "cnn_window=" << enc.cnn_window << "\n"
      << "cnn_filters=" << enc.cnn_filters << "\n"
      << "lstm_layers=" << enc.lstm_layers << "\n"
      << "lstm_state=" << enc.lstm_state << "\n"
      << "mlp_dim=" << enc.mlp_dim << "\n"
      << "use_char=" << (enc.use_char ? "true" : "false") << "\n"
      << "use_pos=" << (enc.use_pos ? "true" : "false") << "\n"
      << "words=" << loaded.vocab.words.size() << "\n"
      << "chars=" << loaded.vocab.chars.size() << "\n"
      << "pos_tags=" << loaded.vocab.pos_tags.size() << "\n"
      << "labels=" << loaded.vocab.num_labels() << "\n";

  long long parameters = 0;
  loaded.model.visit([&](const Tensor& t) { parameters += t.value.size(); });
  out << "parameters=" << parameters << "\n";

  out << "label_inventory=";
  for (size_t i = 0; i < loaded.vocab.labels.size(); ++i) {
    if (i) out << ',';
    out << loaded.vocab.labels[i];
  }
  out << "\n";

  out << "epochs_logged=" << loaded.log.size() << "\n";
  if (!loaded.log.empty()) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "best_epoch=%d best_dev_uas=%.4f best_dev_las=%.4f",
                  loaded.meta.best_epoch, loaded.meta.best_dev_uas, loaded.meta.best_dev_las);
    out << buf << "\n";
  }
}

}  // namespace neuromst
