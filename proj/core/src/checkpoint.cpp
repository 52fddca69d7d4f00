#include "neuromst/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "neuromst/errors.hpp"

namespace neuromst {

namespace {

using nlohmann::json;

constexpr char kMagic[4] = {'N', 'M', 'S', 'T'};
constexpr uint32_t kVersion = 1;

json config_to_json(const EncoderConfig& c) {
  return json{{"word_dim", c.word_dim},
              {"char_dim", c.char_dim},
              {"pos_dim", c.pos_dim},
              {"cnn_window", c.cnn_window},
              {"cnn_filters", c.cnn_filters},
              {"lstm_layers", c.lstm_layers},
              {"lstm_state", c.lstm_state},
              {"mlp_dim", c.mlp_dim},
              {"dropout_embed", c.dropout_embed},
              {"dropout_hidden", c.dropout_hidden},
              {"dropout_layer", c.dropout_layer},
              {"use_char", c.use_char},
              {"use_pos", c.use_pos}};
}

EncoderConfig config_from_json(const json& j) {
  EncoderConfig c;
  c.word_dim = j.at("word_dim").get<int>();
  c.char_dim = j.at("char_dim").get<int>();
  c.pos_dim = j.at("pos_dim").get<int>();
  c.cnn_window = j.at("cnn_window").get<int>();
  c.cnn_filters = j.at("cnn_filters").get<int>();
  c.lstm_layers = j.at("lstm_layers").get<int>();
  c.lstm_state = j.at("lstm_state").get<int>();
  c.mlp_dim = j.at("mlp_dim").get<int>();
  c.dropout_embed = j.at("dropout_embed").get<double>();
  c.dropout_hidden = j.at("dropout_hidden").get<double>();
  c.dropout_layer = j.at("dropout_layer").get<double>();
  c.use_char = j.at("use_char").get<bool>();
  c.use_pos = j.at("use_pos").get<bool>();
  return c;
}

template <class T>
void write_raw(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T read_raw(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw CheckpointError("unexpected end of checkpoint file");
  return value;
}

}  // namespace

void save_checkpoint(const std::string& path, const Model& model, const Vocab& vocab,
                     const TrainMeta& meta, const std::vector<EpochLog>& log) {
  json header;
  header["encoder_config"] = config_to_json(model.encoder.config);
  header["vocab"] = json{{"words", vocab.words},
                         {"chars", vocab.chars},
                         {"pos_tags", vocab.pos_tags},
                         {"labels", vocab.labels},
                         {"word_freq", vocab.word_freq}};
  header["meta"] = json{{"objective", meta.objective},
                        {"ablation", meta.ablation},
                        {"seed", meta.seed},
                        {"best_epoch", meta.best_epoch},
                        {"best_dev_uas", meta.best_dev_uas},
                        {"best_dev_las", meta.best_dev_las}};
  json manifest = json::array();
  model.visit([&](const Tensor& t) {
    manifest.push_back(json{{"name", t.name},
                            {"rows", static_cast<long long>(t.value.rows())},
                            {"cols", static_cast<long long>(t.value.cols())}});
  });
  header["tensors"] = std::move(manifest);
  json log_json = json::array();
  for (const EpochLog& e : log) {
    log_json.push_back(json{{"epoch", e.epoch},
                            {"loss", e.mean_loss},
                            {"dev_uas", e.dev_uas},
                            {"dev_las", e.dev_las},
                            {"lr", e.lr}});
  }
  header["epoch_log"] = std::move(log_json);

  const std::string header_text = header.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot open checkpoint for writing: " + path);
  out.write(kMagic, sizeof(kMagic));
  write_raw(out, kVersion);
  write_raw(out, static_cast<uint64_t>(header_text.size()));
  out.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));
  model.visit([&](const Tensor& t) {
    out.write(reinterpret_cast<const char*>(t.value.data()),
              static_cast<std::streamsize>(sizeof(double) * t.value.size()));
  });
  if (!out) throw CheckpointError("failed writing checkpoint: " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint: " + path);

  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw CheckpointError("not a model checkpoint: " + path);
  }
  const auto version = read_raw<uint32_t>(in);
  if (version != kVersion) {
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto header_len = read_raw<uint64_t>(in);
  std::string header_text(header_len, '\0');
  in.read(header_text.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw CheckpointError("truncated checkpoint header");

  json header;
  try {
    header = json::parse(header_text);
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("corrupt checkpoint header: ") + e.what());
  }

  try {
    const EncoderConfig config = config_from_json(header.at("encoder_config"));
    Vocab vocab;
    const json& jv = header.at("vocab");
    vocab.words = jv.at("words").get<std::vector<std::string>>();
    vocab.chars = jv.at("chars").get<std::vector<uint32_t>>();
    vocab.pos_tags = jv.at("pos_tags").get<std::vector<std::string>>();
    vocab.labels = jv.at("labels").get<std::vector<std::string>>();
    vocab.word_freq = jv.at("word_freq").get<std::vector<long long>>();
    vocab.rebuild_maps();

    LoadedCheckpoint loaded{
        config, std::move(vocab),
        Model(config, static_cast<int>(jv.at("words").size()),
              static_cast<int>(jv.at("chars").size()), static_cast<int>(jv.at("pos_tags").size()),
              static_cast<int>(jv.at("labels").size())),
        TrainMeta{}, {}};

    const json& jm = header.at("meta");
    loaded.meta.objective = jm.at("objective").get<std::string>();
    loaded.meta.ablation = jm.at("ablation").get<std::string>();
    loaded.meta.seed = jm.at("seed").get<unsigned long long>();
    loaded.meta.best_epoch = jm.at("best_epoch").get<int>();
    loaded.meta.best_dev_uas = jm.at("best_dev_uas").get<double>();
    loaded.meta.best_dev_las = jm.at("best_dev_las").get<double>();
    for (const json& je : header.at("epoch_log")) {
      EpochLog e;
      e.epoch = je.at("epoch").get<int>();
      e.mean_loss = je.at("loss").get<double>();
      e.dev_uas = je.at("dev_uas").get<double>();
      e.dev_las = je.at("dev_las").get<double>();
      e.lr = je.at("lr").get<double>();
      loaded.log.push_back(e);
    }

    std::unordered_map<std::string, Tensor*> by_name;
    loaded.model.visit([&](Tensor& t) { by_name.emplace(t.name, &t); });
    const json& manifest = header.at("tensors");
    if (manifest.size() != by_name.size()) {
      throw CheckpointError("tensor manifest lists " + std::to_string(manifest.size()) +
                            " entries, model has " + std::to_string(by_name.size()));
    }
    for (const json& jt : manifest) {
      const std::string name = jt.at("name").get<std::string>();
      const auto it = by_name.find(name);
      if (it == by_name.end()) throw CheckpointError("unknown tensor in checkpoint: " + name);
      Tensor& t = *it->second;
      const auto rows = jt.at("rows").get<long long>();
      const auto cols = jt.at("cols").get<long long>();
      if (rows != t.value.rows() || cols != t.value.cols()) {
        throw CheckpointError("tensor " + name + " has shape " + std::to_string(rows) + "x" +
                              std::to_string(cols) + ", expected " +
                              std::to_string(t.value.rows()) + "x" +
                              std::to_string(t.value.cols()));
      }
      in.read(reinterpret_cast<char*>(t.value.data()),
              static_cast<std::streamsize>(sizeof(double) * t.value.size()));
      if (!in) throw CheckpointError("truncated checkpoint payload at tensor " + name);
    }
    return loaded;
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("corrupt checkpoint header: ") + e.what());
  }
}

}  // namespace neuromst
