// seriate: matrix seriation toolkit CLI.
//
// Subcommands: gen (synthetic instances), reorder (run a method on a CSV
// matrix), eval (flip-aware reordering error), bench (method comparison grid).
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seriate/seriate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag_seed) {
  if (flag_seed) return *flag_seed;
  if (const char* env = std::getenv("SERIATE_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

std::size_t default_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

json command_echo(int argc, char** argv) {
  json arr = json::array();
  for (int i = 0; i < argc; ++i) arr.push_back(std::string(argv[i]));
  return arr;
}

void write_json(const json& j, const fs::path& path) {
  seriate::write_text_file(path, j.dump(2) + "\n");
}

struct GenOptions {
  std::string model;
  std::size_t n = 100;
  std::size_t p = 100;
  std::size_t row_clusters = 3;
  std::size_t col_clusters = 3;
  double sigma = 0.05;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  bool full = false;
};

int run_gen(const GenOptions& opt, const json& echo) {
  const std::uint64_t seed = resolve_seed(opt.seed);
  seriate::Rng rng(seed);
  seriate::SyntheticInstance inst;
  json params{{"n", opt.n}, {"p", opt.p}, {"sigma", opt.sigma}};
  if (opt.model == "lbm") {
    seriate::LbmParams p;
    p.n = opt.n;
    p.p = opt.p;
    p.row_clusters = opt.row_clusters;
    p.col_clusters = opt.col_clusters;
    p.sigma = opt.sigma;
    params["row_clusters"] = opt.row_clusters;
    params["col_clusters"] = opt.col_clusters;
    params["block_means"] = p.block_means.entries();
    inst = seriate::lbm_generate(p, rng);
  } else if (opt.model == "spm") {
    seriate::SpmParams p;
    p.n = opt.n;
    p.p = opt.p;
    p.sigma = opt.sigma;
    params["clusters"] = p.clusters;
    params["stripe_means"] = p.stripe_means;
    inst = seriate::spm_generate(p, rng);
  } else if (opt.model == "gbm") {
    seriate::GbmParams p;
    p.n = opt.n;
    p.p = opt.p;
    p.sigma = opt.sigma;
    inst = seriate::gbm_generate(p, rng);
  } else {
    seriate::DgmParams p;
    p.n = opt.n;
    p.p = opt.p;
    p.sigma = opt.sigma;
    inst = seriate::dgm_generate(p, rng);
  }
  inst.seed = seed;

  const fs::path out(opt.out);
  fs::create_directories(out);
  seriate::write_matrix_csv(inst.observed, out / "observed.csv");
  seriate::write_matrix_csv(inst.mean_observed, out / "mean.csv");
  json truth = seriate::truth_to_json(inst, params);
  truth["command"] = echo;
  if (!inst.row_labels.empty()) {
    truth["row_labels"] = inst.row_labels;
    truth["col_labels"] = inst.col_labels;
  }
  write_json(truth, out / "truth.json");
  if (opt.full) {
    seriate::write_matrix_csv(inst.a_bar, out / "a_bar.csv");
    seriate::write_matrix_csv(inst.mean_bar, out / "mean_bar.csv");
  }
  std::cout << "wrote " << (out / "observed.csv").string() << ", "
            << (out / "mean.csv").string() << ", " << (out / "truth.json").string()
            << (opt.full ? ", a_bar.csv, mean_bar.csv" : "") << "\n";
  return 0;
}

struct ReorderOptions {
  std::string input;
  std::string method = "deeptmr";
  bool normalize = false;
  bool log1p = false;
  bool header = false;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::size_t restarts = 1;
  std::size_t epochs = 100;
  std::size_t batch = 200;
  double learning_rate = 1e-2;
  double lambda = 1e-10;
  std::size_t hidden = 10;
  std::size_t loss_window = 100;
  std::string activation = "tanh";
  std::string output_activation = "linear";
  std::size_t jobs = default_jobs();
  bool save_model = false;
};

int run_reorder(const ReorderOptions& opt, const json& echo) {
  const std::uint64_t seed = resolve_seed(opt.seed);
  seriate::DenseMatrix a = seriate::read_matrix_csv(opt.input, opt.header);
  if (opt.log1p) a = seriate::log1p_transform(a);
  if (opt.normalize) a = seriate::normalize_unit_range(a);

  const fs::path out(opt.out);
  fs::create_directories(out);

  json report{{"schema_version", seriate::kReportSchemaVersion},
              {"tool", {{"name", "seriate"}, {"version", kToolVersion}}},
              {"command", echo},
              {"seed", seed},
              {"method", opt.method},
              {"rng_algorithm", seriate::Rng::kAlgorithmId},
              {"input",
               {{"path", opt.input},
                {"rows", a.rows()},
                {"cols", a.cols()},
                {"normalize", opt.normalize},
                {"log1p", opt.log1p},
                {"header", opt.header}}}};

  seriate::Permutation row_perm, col_perm;
  std::optional<seriate::DenseMatrix> denoised;
  json artifacts;

  if (opt.method == "deeptmr") {
    seriate::TrainConfig cfg;
    cfg.learning_rate = opt.learning_rate;
    cfg.epochs = opt.epochs;
    cfg.lambda = opt.lambda;
    cfg.batch_size = opt.batch;
    cfg.row_encoder_hidden = {opt.hidden};
    cfg.column_encoder_hidden = {opt.hidden};
    cfg.decoder_hidden = {opt.hidden};
    cfg.hidden_activation = seriate::activation_from_label(opt.activation);
    cfg.output_activation = seriate::activation_from_label(opt.output_activation);
    cfg.seed = seed;
    cfg.restarts = opt.restarts;
    cfg.loss_window = opt.loss_window;
    const seriate::RestartOutcome outcome =
        seriate::train_with_restarts(a, cfg, opt.jobs);
    row_perm = outcome.result.row_perm;
    col_perm = outcome.result.col_perm;
    denoised = outcome.result.reordered_denoised;  // already permuted

    report["config"] = {{"learning_rate", cfg.learning_rate},
                        {"epochs", cfg.epochs},
                        {"lambda", cfg.lambda},
                        {"batch_size", cfg.batch_size},
                        {"restarts", cfg.restarts},
                        {"loss_window", cfg.loss_window},
                        {"hidden_activation", seriate::activation_label(cfg.hidden_activation)},
                        {"output_activation", seriate::activation_label(cfg.output_activation)},
                        {"row_encoder_hidden", cfg.row_encoder_hidden},
                        {"column_encoder_hidden", cfg.column_encoder_hidden},
                        {"decoder_hidden", cfg.decoder_hidden},
                        {"iterations",
                         seriate::planned_iterations(cfg.epochs, a.rows(), a.cols(),
                                                     cfg.batch_size)},
                        {"batch_sampling", "with_replacement"}};
    report["row_scores"] = outcome.result.g;
    report["col_scores"] = outcome.result.h;
    report["loss"] = {{"data_term", outcome.result.final_loss.data_term},
                      {"reg_term", outcome.result.final_loss.reg_term},
                      {"total", outcome.result.final_loss.total}};
    json sel{{"selected_trial", outcome.selected_trial},
             {"scores", outcome.selection_scores}};
    json trial_errors = json::array();
    for (const auto& e : outcome.trial_errors) trial_errors.push_back(e);
    sel["trial_errors"] = std::move(trial_errors);
    report["selection"] = std::move(sel);

    std::string history;
    for (double v : outcome.result.loss_history) {
      history += seriate::format_double(v);
      history += '\n';
    }
    seriate::write_text_file(out / "loss_history.csv", history);
    artifacts["loss_history_csv"] = (out / "loss_history.csv").string();

    if (opt.save_model) {
      seriate::save_model(outcome.model, out / "model.json");
      artifacts["model_json"] = (out / "model.json").string();
    }
  } else {
    seriate::BaselineResult res;
    if (opt.method == "svd-rank1") {
      res = seriate::svd_rank_one_order(a);
    } else if (opt.method == "svd-angle") {
      res = seriate::svd_angle_order(a);
    } else {
      res = seriate::mds_order(a);
    }
    row_perm = res.row_perm;
    col_perm = res.col_perm;
    report["config"] = {{"tol", 1e-10}, {"max_iter", 10000}};
    report["row_scores"] = res.row_scores;
    report["col_scores"] = res.col_scores;
    if (!res.degenerate_rows.empty()) report["degenerate_rows"] = res.degenerate_rows;
    if (!res.degenerate_cols.empty()) report["degenerate_cols"] = res.degenerate_cols;
    if (res.denoised) {
      denoised = seriate::apply_permutation(*res.denoised, row_perm, col_perm);
    }
  }

  const seriate::DenseMatrix reordered = seriate::apply_permutation(a, row_perm, col_perm);
  seriate::write_matrix_csv(reordered, out / "reordered.csv");
  seriate::write_permutation_csv(row_perm, out / "row_perm.csv");
  seriate::write_permutation_csv(col_perm, out / "col_perm.csv");
  seriate::write_pgm(a, out / "observed.pgm");
  seriate::write_pgm(reordered, out / "reordered.pgm");
  artifacts["reordered_csv"] = (out / "reordered.csv").string();
  artifacts["row_perm_csv"] = (out / "row_perm.csv").string();
  artifacts["col_perm_csv"] = (out / "col_perm.csv").string();
  artifacts["observed_pgm"] = (out / "observed.pgm").string();
  artifacts["reordered_pgm"] = (out / "reordered.pgm").string();
  if (denoised) {
    seriate::write_matrix_csv(*denoised, out / "denoised.csv");
    seriate::write_pgm(*denoised, out / "denoised.pgm");
    artifacts["denoised_csv"] = (out / "denoised.csv").string();
    artifacts["denoised_pgm"] = (out / "denoised.pgm").string();
  }

  report["row_perm"] = seriate::permutation_to_json(row_perm);
  report["col_perm"] = seriate::permutation_to_json(col_perm);
  report["artifacts"] = std::move(artifacts);
  write_json(report, out / "report.json");
  std::cout << "wrote " << (out / "report.json").string() << "\n";
  return 0;
}

struct EvalOptions {
  std::string mean_bar;
  std::string mean_observed;
  std::string row_perm;
  std::string col_perm;
};

int run_eval(const EvalOptions& opt) {
  const seriate::DenseMatrix mean_bar = seriate::read_matrix_csv(opt.mean_bar);
  const seriate::DenseMatrix mean_observed = seriate::read_matrix_csv(opt.mean_observed);
  const seriate::Permutation row_perm = seriate::read_permutation_csv(opt.row_perm);
  const seriate::Permutation col_perm = seriate::read_permutation_csv(opt.col_perm);
  const seriate::ErrorBreakdown e =
      seriate::reordering_error(mean_bar, mean_observed, row_perm, col_perm);
  std::cout << seriate::error_breakdown_to_json(e).dump(2) << "\n";
  return 0;
}

struct BenchOptions {
  std::vector<double> sigmas;
  std::size_t trials = 10;
  std::vector<std::string> methods{"deeptmr", "svd-rank1", "svd-angle", "mds"};
  std::size_t n = 100;
  std::size_t p = 100;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::size_t jobs = default_jobs();
  std::size_t epochs = 200;
  std::size_t batch = 200;
  double learning_rate = 1e-2;
  double lambda = 1e-10;
  std::size_t restarts = 5;
  std::size_t hidden = 10;
};

int run_bench(const BenchOptions& opt, const json& echo) {
  seriate::BenchmarkConfig cfg;
  cfg.sigmas = opt.sigmas.empty() ? seriate::BenchmarkConfig::default_sigma_grid() : opt.sigmas;
  cfg.trials = opt.trials;
  cfg.methods = opt.methods;
  cfg.n = opt.n;
  cfg.p = opt.p;
  cfg.seed = resolve_seed(opt.seed);
  cfg.jobs = opt.jobs;
  cfg.deeptmr.epochs = opt.epochs;
  cfg.deeptmr.batch_size = opt.batch;
  cfg.deeptmr.learning_rate = opt.learning_rate;
  cfg.deeptmr.lambda = opt.lambda;
  cfg.deeptmr.restarts = opt.restarts;
  cfg.deeptmr.row_encoder_hidden = {opt.hidden};
  cfg.deeptmr.column_encoder_hidden = {opt.hidden};
  cfg.deeptmr.decoder_hidden = {opt.hidden};

  const seriate::BenchmarkReport report = seriate::run_benchmark(cfg);

  const fs::path out(opt.out);
  fs::create_directories(out);
  json j = seriate::benchmark_report_to_json(report);
  j["command"] = echo;
  write_json(j, out / "bench.json");
  seriate::write_text_file(out / "bench.csv", seriate::benchmark_rows_to_csv(report));

  std::size_t failures = 0;
  for (const auto& row : report.rows) {
    if (!row.failure.empty()) ++failures;
  }
  for (const auto& agg : report.aggregates) {
    std::cout << agg.method << " sigma=" << agg.sigma << " mean_error=";
    if (agg.trials_ok > 0) {
      std::cout << agg.mean_error << " std=" << agg.std_error;
    } else {
      std::cout << "n/a";
    }
    std::cout << " trials_ok=" << agg.trials_ok << "\n";
  }
  std::cout << "wrote " << (out / "bench.json").string() << ", "
            << (out / "bench.csv").string() << "\n";
  if (failures == report.rows.size()) {
    std::cerr << "error: every benchmark cell failed\n";
    return 4;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seriate: two-way matrix reordering toolkit"};
  app.require_subcommand(1);

  GenOptions gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a synthetic instance");
  gen_cmd->add_option("model", gen.model, "model: lbm, spm, gbm or dgm")
      ->required()
      ->check(CLI::IsMember({"lbm", "spm", "gbm", "dgm"}));
  gen_cmd->add_option("--n", gen.n, "rows");
  gen_cmd->add_option("--p", gen.p, "columns");
  gen_cmd->add_option("--k,--row-clusters", gen.row_clusters, "row clusters (lbm)");
  gen_cmd->add_option("--col-clusters", gen.col_clusters, "column clusters (lbm)");
  gen_cmd->add_option("--sigma", gen.sigma, "noise standard deviation");
  gen_cmd->add_option("--seed", gen.seed, "rng seed (decimal 64-bit)");
  gen_cmd->add_option("--out", gen.out, "output directory");
  gen_cmd->add_flag("--full", gen.full, "also write a_bar.csv and mean_bar.csv");

  ReorderOptions reorder;
  CLI::App* reorder_cmd = app.add_subcommand("reorder", "reorder a CSV matrix");
  reorder_cmd->add_option("input", reorder.input, "input matrix CSV")->required();
  reorder_cmd->add_option("--method", reorder.method, "reordering method")
      ->check(CLI::IsMember({"deeptmr", "svd-rank1", "svd-angle", "mds"}));
  reorder_cmd->add_flag("--normalize", reorder.normalize,
                        "rescale entries onto [0,1] before reordering");
  reorder_cmd->add_flag("--log1p", reorder.log1p, "apply log(1+x) before reordering");
  reorder_cmd->add_flag("--header", reorder.header, "skip one header row on input");
  reorder_cmd->add_option("--out", reorder.out, "output directory");
  reorder_cmd->add_option("--seed", reorder.seed, "rng seed (decimal 64-bit)");
  reorder_cmd->add_option("--restarts", reorder.restarts, "training restarts");
  reorder_cmd->add_option("--epochs", reorder.epochs, "training epochs");
  reorder_cmd->add_option("--batch", reorder.batch, "mini-batch size");
  reorder_cmd->add_option("--lr", reorder.learning_rate, "Adam learning rate");
  reorder_cmd->add_option("--lambda", reorder.lambda, "L2 regularization weight");
  reorder_cmd->add_option("--hidden", reorder.hidden, "hidden width of all three networks");
  reorder_cmd->add_option("--loss-window", reorder.loss_window,
                          "iterations in the restart selection window");
  reorder_cmd->add_option("--activation", reorder.activation,
                          "hidden activation: tanh, sigmoid or relu")
      ->check(CLI::IsMember({"tanh", "sigmoid", "relu"}));
  reorder_cmd->add_option("--output-activation", reorder.output_activation,
                          "output activation: linear, tanh or sigmoid")
      ->check(CLI::IsMember({"linear", "tanh", "sigmoid"}));
  reorder_cmd->add_option("--jobs", reorder.jobs, "concurrent restart trials");
  reorder_cmd->add_flag("--save-model", reorder.save_model, "write model.json checkpoint");

  EvalOptions eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "flip-aware reordering error");
  eval_cmd->add_option("mean_bar", eval.mean_bar, "latent-order mean matrix CSV")->required();
  eval_cmd->add_option("mean_observed", eval.mean_observed, "observed-order mean matrix CSV")
      ->required();
  eval_cmd->add_option("row_perm", eval.row_perm, "candidate row permutation CSV")->required();
  eval_cmd->add_option("col_perm", eval.col_perm, "candidate column permutation CSV")->required();

  BenchOptions bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "method comparison grid on dgm instances");
  bench_cmd->add_option("--sigmas", bench.sigmas, "noise levels (default 0.03..0.30)");
  bench_cmd->add_option("--trials", bench.trials, "instances per noise level");
  bench_cmd->add_option("--methods", bench.methods, "methods to compare")
      ->check(CLI::IsMember({"deeptmr", "svd-rank1", "svd-angle", "mds"}));
  bench_cmd->add_option("--n", bench.n, "rows");
  bench_cmd->add_option("--p", bench.p, "columns");
  bench_cmd->add_option("--seed", bench.seed, "base seed");
  bench_cmd->add_option("--out", bench.out, "output directory");
  bench_cmd->add_option("--jobs", bench.jobs, "concurrent grid cells");
  bench_cmd->add_option("--epochs", bench.epochs, "deeptmr epochs");
  bench_cmd->add_option("--batch", bench.batch, "deeptmr batch size");
  bench_cmd->add_option("--lr", bench.learning_rate, "deeptmr learning rate");
  bench_cmd->add_option("--lambda", bench.lambda, "deeptmr L2 weight");
  bench_cmd->add_option("--restarts", bench.restarts, "deeptmr restarts per cell");
  bench_cmd->add_option("--hidden", bench.hidden, "deeptmr hidden width");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const json echo = command_echo(argc, argv);
  try {
    if (gen_cmd->parsed()) return run_gen(gen, echo);
    if (reorder_cmd->parsed()) return run_reorder(reorder, echo);
    if (eval_cmd->parsed()) return run_eval(eval);
    if (bench_cmd->parsed()) return run_bench(bench, echo);
  } catch (const seriate::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const seriate::SizeMismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const seriate::DegenerateRangeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const seriate::NegativeEntryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const seriate::BadRangeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const seriate::Error& e) {
    // NoConvergence, ZeroMatrix, RankDeficient, NotSymmetric, NonFinite.
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
