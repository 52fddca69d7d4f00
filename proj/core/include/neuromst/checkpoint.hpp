#pragma once

#include <string>
#include <vector>

#include "neuromst/trainer.hpp"

namespace neuromst {

/// Run provenance carried inside the checkpoint next to the parameters.
struct TrainMeta {
  std::string objective = "global_likelihood";
  std::string ablation = "full";
  unsigned long long seed = 1;
  int best_epoch = 0;
  double best_dev_uas = -1.0;
  double best_dev_las = -1.0;
};

struct LoadedCheckpoint {
  EncoderConfig config;
  Vocab vocab;
  Model model;
  TrainMeta meta;
  std::vector<EpochLog> log;
};

/// Single-file model archive: magic + version + JSON header (config,
/// vocabulary, tensor manifest, metadata, epoch log) + raw little-endian
/// float64 payload in manifest order, column-major per tensor.
void save_checkpoint(const std::string& path, const Model& model, const Vocab& vocab,
                     const TrainMeta& meta, const std::vector<EpochLog>& log);

/// Rebuilds the model from the archive. Bad magic, unsupported version,
/// manifest/shape mismatches, or truncation raise CheckpointError.
LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace neuromst
