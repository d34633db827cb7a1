#include "rbnn/checkpoint.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rbnn/errors.hpp"
#include "rbnn/table.hpp"

namespace rbnn {

namespace {

using nlohmann::json;

// The writer emits JSON by hand so every double carries 17 significant
// digits (nlohmann prints shortest-round-trip forms, which are exact too but
// the file format pins the digit count).
void append_array(std::string& out, const std::vector<double>& values) {
  out += '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    out += format_double(values[i]);
  }
  out += ']';
}

void require_finite(const std::vector<double>& values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw CheckpointError(std::string("save_checkpoint: non-finite value in ") + what);
    }
  }
}

std::vector<double> read_doubles(const json& node, const std::string& key,
                                 std::size_t expected) {
  if (!node.contains(key) || !node[key].is_array()) {
    throw CheckpointError("checkpoint: missing array \"" + key + "\"");
  }
  std::vector<double> values;
  values.reserve(node[key].size());
  for (const auto& v : node[key]) {
    if (!v.is_number()) {
      throw CheckpointError("checkpoint: non-numeric entry in \"" + key + "\"");
    }
    values.push_back(v.get<double>());
  }
  if (values.size() != expected) {
    throw CheckpointError("checkpoint: \"" + key + "\" has " +
                          std::to_string(values.size()) + " entries, expected " +
                          std::to_string(expected));
  }
  return values;
}

}  // namespace

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path) {
  const auto& model = checkpoint.model;
  if (model.layers.empty()) {
    throw CheckpointError("save_checkpoint: model has no layers");
  }

  std::string out;
  out += "{\n";
  out += "  \"format_version\": " + std::to_string(kCheckpointFormatVersion) + ",\n";

  out += "  \"layer_sizes\": [";
  const auto sizes = model.layer_sizes();
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    out += std::to_string(sizes[i]);
  }
  out += "],\n";

  out += "  \"layers\": [\n";
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const auto& layer = model.layers[l];
    require_finite(layer.weight_mean, "weight_mean");
    require_finite(layer.weight_rho, "weight_rho");
    require_finite(layer.bias_mean, "bias_mean");
    require_finite(layer.bias_rho, "bias_rho");
    out += "    {\"weight_mean\": ";
    append_array(out, layer.weight_mean);
    out += ", \"weight_rho\": ";
    append_array(out, layer.weight_rho);
    out += ", \"bias_mean\": ";
    append_array(out, layer.bias_mean);
    out += ", \"bias_rho\": ";
    append_array(out, layer.bias_rho);
    out += l + 1 < model.layers.size() ? "},\n" : "}\n";
  }
  out += "  ],\n";

  if (checkpoint.standardizer) {
    require_finite(checkpoint.standardizer->means, "standardizer means");
    require_finite(checkpoint.standardizer->stds, "standardizer stds");
    out += "  \"standardizer\": {\"means\": ";
    append_array(out, checkpoint.standardizer->means);
    out += ", \"stds\": ";
    append_array(out, checkpoint.standardizer->stds);
    out += "},\n";
  } else {
    out += "  \"standardizer\": null,\n";
  }

  out += "  \"feature_names\": [";
  for (std::size_t i = 0; i < checkpoint.feature_names.size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    out += json(checkpoint.feature_names[i]).dump();
  }
  out += "],\n";

  if (checkpoint.split_seed && checkpoint.split_train_count) {
    out += "  \"split\": {\"seed\": " + std::to_string(*checkpoint.split_seed) +
           ", \"train_count\": " + std::to_string(*checkpoint.split_train_count) +
           "}\n";
  } else {
    out += "  \"split\": null\n";
  }
  out += "}\n";

  write_file_atomic(path, out);
}

void save_checkpoint(const BnnClassifier& model, const std::string& path) {
  save_checkpoint(Checkpoint{model, std::nullopt, {}, std::nullopt, std::nullopt},
                  path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw CheckpointError("cannot open checkpoint: " + path);
  }
  json doc;
  try {
    doc = json::parse(file);
  } catch (const json::parse_error& e) {
    throw CheckpointError("malformed checkpoint " + path + ": " + e.what());
  }

  if (!doc.contains("format_version") || !doc["format_version"].is_number_integer()) {
    throw CheckpointError("checkpoint: missing format_version");
  }
  const int version = doc["format_version"].get<int>();
  if (version != kCheckpointFormatVersion) {
    throw CheckpointError("checkpoint: unsupported format_version " +
                          std::to_string(version) + " (expected " +
                          std::to_string(kCheckpointFormatVersion) + ")");
  }

  if (!doc.contains("layer_sizes") || !doc["layer_sizes"].is_array() ||
      doc["layer_sizes"].size() < 2) {
    throw CheckpointError("checkpoint: invalid layer_sizes");
  }
  std::vector<std::size_t> sizes;
  for (const auto& v : doc["layer_sizes"]) {
    if (!v.is_number_unsigned() || v.get<std::size_t>() < 1) {
      throw CheckpointError("checkpoint: layer sizes must be positive integers");
    }
    sizes.push_back(v.get<std::size_t>());
  }

  if (!doc.contains("layers") || !doc["layers"].is_array() ||
      doc["layers"].size() != sizes.size() - 1) {
    throw CheckpointError("checkpoint: layer count does not match layer_sizes");
  }

  Checkpoint checkpoint;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    LayerVariational layer;
    layer.fan_in = sizes[l];
    layer.fan_out = sizes[l + 1];
    const auto& node = doc["layers"][l];
    layer.weight_mean = read_doubles(node, "weight_mean", layer.weight_count());
    layer.weight_rho = read_doubles(node, "weight_rho", layer.weight_count());
    layer.bias_mean = read_doubles(node, "bias_mean", layer.fan_out);
    layer.bias_rho = read_doubles(node, "bias_rho", layer.fan_out);
    checkpoint.model.layers.push_back(std::move(layer));
  }

  if (doc.contains("standardizer") && !doc["standardizer"].is_null()) {
    const auto& node = doc["standardizer"];
    Standardizer s;
    if (!node.contains("means") || !node["means"].is_array()) {
      throw CheckpointError("checkpoint: standardizer missing means");
    }
    const std::size_t dim = node["means"].size();
    s.means = read_doubles(node, "means", dim);
    s.stds = read_doubles(node, "stds", dim);
    for (double sd : s.stds) {
      if (!(sd > 0.0)) {
        throw CheckpointError("checkpoint: standardizer stds must be positive");
      }
    }
    checkpoint.standardizer = std::move(s);
  }

  if (doc.contains("feature_names") && doc["feature_names"].is_array()) {
    for (const auto& v : doc["feature_names"]) {
      if (!v.is_string()) {
        throw CheckpointError("checkpoint: feature names must be strings");
      }
      checkpoint.feature_names.push_back(v.get<std::string>());
    }
  }
  if (!checkpoint.feature_names.empty() &&
      checkpoint.feature_names.size() != checkpoint.model.input_dim()) {
    throw CheckpointError("checkpoint: feature_names length does not match input size");
  }
  if (checkpoint.standardizer &&
      checkpoint.standardizer->means.size() != checkpoint.model.input_dim()) {
    throw CheckpointError("checkpoint: standardizer width does not match input size");
  }

  if (doc.contains("split") && !doc["split"].is_null()) {
    const auto& node = doc["split"];
    if (!node.contains("seed") || !node.contains("train_count")) {
      throw CheckpointError("checkpoint: split must carry seed and train_count");
    }
    checkpoint.split_seed = node["seed"].get<std::uint64_t>();
    checkpoint.split_train_count = node["train_count"].get<std::size_t>();
  }
  return checkpoint;
}

}  // namespace rbnn
