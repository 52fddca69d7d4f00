#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "neuromst/commands.hpp"
#include "neuromst/errors.hpp"

namespace {

using neuromst::RunConfig;

// Per-subcommand option state: config file, raw overrides, and sugar flags
// that expand to the same key=value assignments.
struct Cli {
  std::string config_file;
  std::vector<std::string> sets;
  std::vector<std::pair<std::string, std::string>> flags;  // key -> value

  void add_common(CLI::App& cmd) {
    cmd.add_option("--config", config_file, "key=value config file");
    cmd.add_option("--set", sets, "override a config key (key=value, repeatable)");
  }

  void add_path(CLI::App& cmd, const std::string& flag, const std::string& key,
                const std::string& help) {
    cmd.add_option_function<std::string>(
        flag, [this, key](const std::string& value) { flags.emplace_back(key, value); }, help);
  }

  void add_switch(CLI::App& cmd, const std::string& flag, const std::string& key,
                  const std::string& help) {
    cmd.add_flag_callback(
        flag, [this, key] { flags.emplace_back(key, "true"); }, help);
  }

  RunConfig merge() const {
    RunConfig config;
    if (!config_file.empty()) config = neuromst::read_config_file(config_file);
    for (const std::string& s : sets) neuromst::apply_setting(config, s);
    for (const auto& [key, value] : flags) neuromst::apply_setting(config, key + "=" + value);
    return config;
  }
};

int dispatch(const std::function<void(const RunConfig&, std::ostream&, std::ostream&)>& body,
             const Cli& cli) {
  try {
    body(cli.merge(), std::cout, std::cerr);
    return 0;
  } catch (const neuromst::InferenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const neuromst::SingularMatrixError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const neuromst::TrainingDivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const neuromst::RefusalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const neuromst::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const neuromst::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neural probabilistic dependency parser over non-projective spanning trees"};
  app.require_subcommand(1);

  Cli train_cli, parse_cli, eval_cli, inspect_cli;

  CLI::App* train = app.add_subcommand("train", "Train a parser and save a checkpoint");
  train_cli.add_common(*train);
  train_cli.add_path(*train, "--train", "train", "training treebank (CoNLL-X)");
  train_cli.add_path(*train, "--dev", "dev", "development treebank (CoNLL-X)");
  train_cli.add_path(*train, "--embeddings", "embeddings", "pretrained word vectors (text)");
  train_cli.add_path(*train, "--model", "model", "checkpoint output path");
  train_cli.add_path(*train, "--objective", "objective",
                     "global_likelihood or cross_entropy");
  train_cli.add_path(*train, "--ablation", "ablation", "basic, plus_char, plus_pos, or full");
  train_cli.add_path(*train, "--epochs", "epochs", "number of training epochs");
  train_cli.add_path(*train, "--batch-size", "batch_size", "sentences per update");
  train_cli.add_path(*train, "--seed", "seed", "random seed");
  train_cli.add_switch(*train, "--single-root", "single_root",
                       "evaluate dev with exactly one root child");

  CLI::App* parse = app.add_subcommand("parse", "Parse a CoNLL-X file with a checkpoint");
  parse_cli.add_common(*parse);
  parse_cli.add_path(*parse, "--model", "model", "checkpoint path");
  parse_cli.add_path(*parse, "--input", "input", "input treebank (CoNLL-X)");
  parse_cli.add_path(*parse, "--output", "output", "prediction file (default: stdout)");
  parse_cli.add_switch(*parse, "--single-root", "single_root",
                       "force exactly one root child per sentence");

  CLI::App* eval = app.add_subcommand("eval", "Score predictions against gold");
  eval_cli.add_common(*eval);
  eval_cli.add_path(*eval, "--gold", "gold", "gold treebank (CoNLL-X)");
  eval_cli.add_path(*eval, "--pred", "pred", "predicted treebank (CoNLL-X)");
  eval_cli.add_path(*eval, "--punctuation", "punctuation",
                    "include_all or exclude_unicode_punct");

  CLI::App* inspect = app.add_subcommand("inspect", "Print a checkpoint's model card");
  inspect_cli.add_common(*inspect);
  inspect_cli.add_path(*inspect, "--model", "model", "checkpoint path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (train->parsed()) return dispatch(neuromst::run_train, train_cli);
  if (parse->parsed()) return dispatch(neuromst::run_parse, parse_cli);
  if (eval->parsed()) return dispatch(neuromst::run_eval, eval_cli);
  return dispatch(neuromst::run_inspect, inspect_cli);
}
