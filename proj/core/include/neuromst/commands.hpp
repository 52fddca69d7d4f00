#pragma once

#include <iosfwd>

#include "neuromst/run_config.hpp"

namespace neuromst {

/// Subcommand bodies behind the executable. Each takes the merged config,
/// writes data to `out` (or the configured output file) and progress to
/// `log`, and throws the library error types; the executable maps those to
/// exit codes.

/// Train on config.train_path, select by dev LAS on config.dev_path, save a
/// checkpoint to config.model_path, and print the best epoch and scores.
void run_train(const RunConfig& config, std::ostream& out, std::ostream& log);

/// Parse config.input_path with the checkpoint at config.model_path and
/// write CoNLL-X predictions to config.output_path (stdout when empty).
void run_parse(const RunConfig& config, std::ostream& out, std::ostream& log);

/// Score config.pred_path against config.gold_path and print "uas= las=".
void run_eval(const RunConfig& config, std::ostream& out, std::ostream& log);

/// Print a model card for the checkpoint at config.model_path: dimensions,
/// vocabulary sizes, label inventory, and a training log summary.
void run_inspect(const RunConfig& config, std::ostream& out, std::ostream& log);

}  // namespace neuromst
