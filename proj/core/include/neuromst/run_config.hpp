#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "neuromst/trainer.hpp"

namespace neuromst {

/// One flat settings record shared by all subcommands. Lives in a key=value
/// text file; command-line --set overrides win over the file. Unknown keys
/// are rejected so a typo cannot silently fall back to a default.
struct RunConfig {
  // Paths.
  std::string train_path;
  std::string dev_path;
  std::string input_path;
  std::string output_path;
  std::string embeddings_path;
  std::string model_path;
  std::string gold_path;
  std::string pred_path;

  // Representation sizes and dropout.
  EncoderConfig encoder;

  // Objective and schedule.
  Objective objective = Objective::global_likelihood;
  Ablation ablation = Ablation::full;
  int batch_size = 32;
  int epochs = 120;
  unsigned long long seed = 1;
  int min_freq = 1;
  double unk_replace_prob = 0.5;
  int dev_every = 1;
  bool abort_on_invalid_tree = false;
  int max_sentence_length = 0;

  double learning_rate = 0.002;
  double decay = 0.5;
  double clip = 5.0;
  std::vector<int> schedule = {10, 30, 50, 70, 100};

  // Decoding and scoring flags.
  bool single_root = false;
  PunctuationPolicy punct = PunctuationPolicy::include_all;

  bool operator==(const RunConfig& other) const;

  TrainConfig train_config() const;
};

std::string to_string(Objective objective);
std::string to_string(Ablation ablation);
std::string to_string(PunctuationPolicy policy);
Objective objective_from_string(const std::string& text);    // ConfigError
Ablation ablation_from_string(const std::string& text);      // ConfigError
PunctuationPolicy punct_from_string(const std::string& text);  // ConfigError

/// Applies one "key=value" assignment. Unknown key, malformed value, or a
/// missing '=' raise ConfigError naming the offender.
void apply_setting(RunConfig& config, const std::string& assignment);

/// Reads a key=value file: one assignment per line, blank lines and
/// '#' comments skipped. Errors carry the line number.
RunConfig read_config_file(const std::string& path);

/// Writes every field as key=value, one per line, in a fixed order.
/// Feeding the output back through apply_setting reproduces the config.
void echo_config(const RunConfig& config, std::ostream& out);

}  // namespace neuromst
