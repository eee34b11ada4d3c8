#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "seriate/deeptmr.hpp"
#include "seriate/errors.hpp"
#include "seriate/io.hpp"
#include "seriate/nn.hpp"

namespace seriate {

inline constexpr int kModelFormatVersion = 1;

/// Layer sizes, activation labels and row-major weight dumps. JSON doubles use
/// the shortest round-trip form, so save/load is bit-exact.
inline nlohmann::json mlp_to_json(const Mlp& net) {
  nlohmann::json weights = nlohmann::json::array();
  nlohmann::json biases = nlohmann::json::array();
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    weights.push_back(net.weights[l].entries());
    biases.push_back(net.biases[l]);
  }
  return nlohmann::json{{"layer_sizes", net.layer_sizes},
                        {"hidden_activation", activation_label(net.hidden_activation)},
                        {"output_activation", activation_label(net.output_activation)},
                        {"weights", std::move(weights)},
                        {"biases", std::move(biases)}};
}

inline Mlp mlp_from_json(const nlohmann::json& j) {
  Mlp net;
  net.layer_sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
  if (net.layer_sizes.size() < 2) throw BadRangeError("model json: need at least two layers");
  net.hidden_activation = activation_from_label(j.at("hidden_activation").get<std::string>());
  net.output_activation = activation_from_label(j.at("output_activation").get<std::string>());
  const auto& weights = j.at("weights");
  const auto& biases = j.at("biases");
  if (weights.size() != net.layer_sizes.size() - 1 || biases.size() != weights.size()) {
    throw BadRangeError("model json: layer count mismatch");
  }
  for (std::size_t l = 0; l + 1 < net.layer_sizes.size(); ++l) {
    const std::size_t rows = net.layer_sizes[l + 1];
    const std::size_t cols = net.layer_sizes[l];
    auto flat = weights[l].get<std::vector<double>>();
    if (flat.size() != rows * cols) throw BadRangeError("model json: weight shape mismatch");
    DenseMatrix w(rows, cols);
    w.entries() = std::move(flat);
    net.weights.push_back(std::move(w));
    auto b = biases[l].get<std::vector<double>>();
    if (b.size() != rows) throw BadRangeError("model json: bias shape mismatch");
    net.biases.push_back(std::move(b));
  }
  return net;
}

inline nlohmann::json model_to_json(const DeepTmrModel& model) {
  return nlohmann::json{{"format", "seriate-model"},
                        {"version", kModelFormatVersion},
                        {"networks",
                         {{"row_encoder", mlp_to_json(model.row_encoder)},
                          {"column_encoder", mlp_to_json(model.column_encoder)},
                          {"decoder", mlp_to_json(model.decoder)}}}};
}

inline DeepTmrModel model_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "seriate-model") {
    throw BadRangeError("model json: unexpected format tag");
  }
  if (j.value("version", 0) != kModelFormatVersion) {
    throw BadRangeError("model json: unsupported version");
  }
  const auto& nets = j.at("networks");
  DeepTmrModel model;
  model.row_encoder = mlp_from_json(nets.at("row_encoder"));
  model.column_encoder = mlp_from_json(nets.at("column_encoder"));
  model.decoder = mlp_from_json(nets.at("decoder"));
  return model;
}

inline void save_model(const DeepTmrModel& model, const std::filesystem::path& path) {
  write_text_file(path, model_to_json(model).dump(2) + "\n");
}

inline DeepTmrModel load_model(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("model json: ") + e.what(), 0, 0);
  }
  return model_from_json(j);
}

}  // namespace seriate
