#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "seriate/eval.hpp"
#include "seriate/io.hpp"
#include "seriate/permutation.hpp"
#include "seriate/rng.hpp"
#include "seriate/synthetic.hpp"

namespace seriate {

inline constexpr int kReportSchemaVersion = 1;

inline nlohmann::json permutation_to_json(const Permutation& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < p.size(); ++i) arr.push_back(p(i));
  return arr;
}

inline Permutation permutation_from_json(const nlohmann::json& arr) {
  std::vector<std::size_t> mapping;
  mapping.reserve(arr.size());
  for (const auto& v : arr) mapping.push_back(v.get<std::size_t>());
  return Permutation::from_mapping(std::move(mapping));
}

inline nlohmann::json error_breakdown_to_json(const ErrorBreakdown& e) {
  return nlohmann::json{{"error", e.error},
                        {"row_flip", e.row_flip},
                        {"col_flip", e.col_flip},
                        {"per_flip_errors", e.per_flip_errors}};
}

/// Sidecar emitted next to a generated instance: parameters, seed, the applied
/// shuffle and the orders that reconstruct the latent arrangement.
inline nlohmann::json truth_to_json(const SyntheticInstance& inst, const nlohmann::json& params) {
  return nlohmann::json{{"schema_version", kReportSchemaVersion},
                        {"model", inst.model},
                        {"params", params},
                        {"seed", inst.seed},
                        {"rng_algorithm", Rng::kAlgorithmId},
                        {"sigma", inst.sigma},
                        {"normalization", {{"min", inst.norm_min}, {"max", inst.norm_max}}},
                        {"shuffle_row_perm", permutation_to_json(inst.true_row_perm)},
                        {"shuffle_col_perm", permutation_to_json(inst.true_col_perm)},
                        {"true_row_order", permutation_to_json(inst.true_row_perm.inverse())},
                        {"true_col_order", permutation_to_json(inst.true_col_perm.inverse())}};
}

inline nlohmann::json benchmark_config_to_json(const BenchmarkConfig& cfg) {
  return nlohmann::json{
      {"sigmas", cfg.sigmas},
      {"trials", cfg.trials},
      {"methods", cfg.methods},
      {"n", cfg.n},
      {"p", cfg.p},
      {"seed", cfg.seed},
      {"jobs", cfg.jobs},
      {"rng_algorithm", Rng::kAlgorithmId},
      {"shared_instances", true},
      {"batch_sampling", "with_replacement"},
      {"deeptmr",
       {{"learning_rate", cfg.deeptmr.learning_rate},
        {"epochs", cfg.deeptmr.epochs},
        {"lambda", cfg.deeptmr.lambda},
        {"batch_size", cfg.deeptmr.batch_size},
        {"restarts", cfg.deeptmr.restarts},
        {"loss_window", cfg.deeptmr.loss_window},
        {"hidden_activation", activation_label(cfg.deeptmr.hidden_activation)},
        {"output_activation", activation_label(cfg.deeptmr.output_activation)},
        {"row_encoder_hidden", cfg.deeptmr.row_encoder_hidden},
        {"column_encoder_hidden", cfg.deeptmr.column_encoder_hidden},
        {"decoder_hidden", cfg.deeptmr.decoder_hidden}}}};
}

inline nlohmann::json benchmark_report_to_json(const BenchmarkReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json r{{"method", row.method},
                     {"sigma", row.sigma},
                     {"sigma_index", row.sigma_index},
                     {"trial", row.trial},
                     {"cell_seed", row.cell_seed},
                     {"wall_time_ms", row.wall_time_ms}};
    if (row.failure.empty()) {
      r["error"] = row.error;
      r["row_flip"] = row.row_flip;
      r["col_flip"] = row.col_flip;
    } else {
      r["failure"] = row.failure;
    }
    if (row.selection_score) r["selection_score"] = *row.selection_score;
    rows.push_back(std::move(r));
  }
  nlohmann::json aggs = nlohmann::json::array();
  for (const auto& agg : report.aggregates) {
    nlohmann::json a{{"method", agg.method},
                     {"sigma", agg.sigma},
                     {"trials_ok", agg.trials_ok}};
    if (agg.trials_ok > 0) {
      a["mean_error"] = agg.mean_error;
      a["std_error"] = agg.std_error;
    }
    aggs.push_back(std::move(a));
  }
  return nlohmann::json{{"schema_version", kReportSchemaVersion},
                        {"config", benchmark_config_to_json(report.config)},
                        {"rows", std::move(rows)},
                        {"aggregates", std::move(aggs)}};
}

/// Flat CSV of the raw benchmark rows (header + one line per cell).
inline std::string benchmark_rows_to_csv(const BenchmarkReport& report) {
  std::string out = "method,sigma,trial,cell_seed,error,row_flip,col_flip,wall_time_ms,"
                    "selection_score,failure\n";
  for (const auto& row : report.rows) {
    out += row.method;
    out += ',';
    out += format_double(row.sigma);
    out += ',';
    out += std::to_string(row.trial);
    out += ',';
    out += std::to_string(row.cell_seed);
    out += ',';
    out += row.failure.empty() ? format_double(row.error) : std::string();
    out += ',';
    out += std::to_string(row.row_flip);
    out += ',';
    out += std::to_string(row.col_flip);
    out += ',';
    out += format_double(row.wall_time_ms);
    out += ',';
    out += row.selection_score ? format_double(*row.selection_score) : std::string();
    out += ',';
    out += row.failure;
    out += '\n';
  }
  return out;
}

}  // namespace seriate
