/*
 * Copyright 2026 The SMLM Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end: train, predict, evaluate, cv, synth.
//
// Exit codes:
//   0  success
//   1  unexpected internal error
//   2  usage or configuration error
//   3  data error (unreadable or malformed input, dimension mismatch)
//   4  numerical failure (non-finite iterate)

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "smlm/io.hpp"
#include "smlm/smlm.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kData = 3,
  kNumerical = 4,
};

struct DataFlags {
  std::string path;
  std::string format = "auto";
  std::size_t dim = 0;
  bool zero_as_negative = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--data", path, "Input dataset")->required();
    cmd->add_option("--format", format, "svmlight, dense or auto (by extension)")
        ->check(CLI::IsMember({"auto", "svmlight", "dense"}));
    cmd->add_option("--dim", dim, "Feature count for sparse input (0 = infer)");
    cmd->add_flag("--zero-as-negative", zero_as_negative,
                  "Read label 0 as -1");
  }

  smlm::Dataset load() const {
    smlm::io::ReadOptions opts;
    opts.format = format == "auto"       ? smlm::io::guess_format(path)
                  : format == "dense"    ? smlm::io::DataFormat::kDense
                                         : smlm::io::DataFormat::kSvmlight;
    opts.dim = dim;
    opts.zero_as_negative = zero_as_negative;
    return smlm::io::read_dataset(path, opts);
  }
};

struct TrainFlags {
  std::string loss = "fscore";
  double C = 1.0;
  std::optional<double> L;
  double epsilon = 1e-8;
  std::size_t max_iter = 500;
  double tol = 1e-6;
  std::size_t shards = 1;
  std::uint64_t seed = 0;

  void add_to(CLI::App* cmd, bool with_shards) {
    cmd->add_option("--loss", loss, "fscore, auroc or prbep")
        ->check(CLI::IsMember({"fscore", "auroc", "prbep"}));
    cmd->add_option("--C", C, "Loss/sparsity tradeoff")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--L", L, "Constant step size (default: max(C,1)*sum|x|^2)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--epsilon", epsilon, "Floor on |w_j| in the L1 reweighting")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", max_iter, "Iteration cap")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol", tol, "Stop when |w_k+1 - w_k|_2 <= tol")
        ->check(CLI::NonNegativeNumber);
    if (with_shards) {
      cmd->add_option("--shards", shards, "Gradient shards")
          ->check(CLI::PositiveNumber);
    }
    cmd->add_option("--seed", seed, "Seed for every random choice");
  }

  smlm::TrainConfig config(std::size_t workers) const {
    smlm::TrainConfig c;
    c.loss_kind = *smlm::parse_loss_kind(loss);
    c.C = C;
    c.L = L;
    c.epsilon = epsilon;
    c.max_iter = max_iter;
    c.tol = tol;
    c.seed = seed;
    c.shards = shards;
    c.workers = workers;
    return c;
  }
};

void open_or_throw(std::ofstream& out, const std::string& path) {
  out.open(path, std::ios::binary);
  if (!out) throw smlm::DataError("cannot write '" + path + "'");
}

int cmd_train(const DataFlags& data_flags, const TrainFlags& tf,
              std::size_t workers, const std::string& out_model,
              const std::string& trace_path) {
  const auto data = data_flags.load();
  const auto result = smlm::fit(data, tf.config(workers));
  smlm::io::write_model(out_model, {result.model, smlm::io::utc_timestamp()});
  if (!trace_path.empty()) {
    std::ofstream out;
    open_or_throw(out, trace_path);
    smlm::io::write_trace(out, result.objective_trace);
  }
  std::cerr << "trained " << result.model.train_meta.iterations_run
            << " iterations, objective "
            << result.model.train_meta.final_objective << "\n";
  return kOk;
}

smlm::Model load_model_for(const std::string& model_path,
                           const smlm::Dataset& data) {
  auto mf = smlm::io::read_model(model_path);
  if (mf.model.dim() != data.dim()) {
    throw smlm::DataError("model has dim " + std::to_string(mf.model.dim()) +
                          " but data has dim " + std::to_string(data.dim()));
  }
  return mf.model;
}

int cmd_predict(const DataFlags& data_flags, const std::string& model_path,
                const std::string& out_path) {
  const auto data = data_flags.load();
  const auto model = load_model_for(model_path, data);
  const auto scores = smlm::compute_scores(data, model.w);
  const auto labels = smlm::predict_labels(scores);
  if (out_path.empty() || out_path == "-") {
    smlm::io::write_predictions(std::cout, labels, scores);
  } else {
    std::ofstream out;
    open_or_throw(out, out_path);
    smlm::io::write_predictions(out, labels, scores);
  }
  return kOk;
}

int cmd_evaluate(const DataFlags& data_flags, const std::string& model_path) {
  const auto data = data_flags.load();
  const auto model = load_model_for(model_path, data);
  const auto scores = smlm::compute_scores(data, model.w);
  smlm::io::Json j;
  j["n"] = data.size();
  j["fscore"] =
      smlm::fscore_from_predictions(data.labels(), smlm::predict_labels(scores));
  j["auroc"] = smlm::auroc_from_scores(data.labels(), scores);
  j["prbep"] = smlm::prbep_from_scores(data.labels(), scores);
  std::cout << j.dump(2) << "\n";
  return kOk;
}

int cmd_cv(const DataFlags& data_flags, const TrainFlags& tf,
           std::size_t workers, std::size_t k, const std::string& out_report) {
  const auto data = data_flags.load();
  const auto config = tf.config(1);
  const auto start = std::chrono::steady_clock::now();
  const auto cv = smlm::cross_validate(data, config, k, tf.seed, workers);
  smlm::io::RunContext ctx{data_flags.path, config, k, tf.seed,
                           std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count()};
  const auto report = smlm::io::make_run_report(cv, data, ctx);
  smlm::io::write_text(out_report, report.dump(2) + "\n");
  std::cerr << "F " << cv.report.fscore << "  AUROC " << cv.report.auroc
            << "  PRBEP " << cv.report.prbep << "\n";
  return kOk;
}

int cmd_synth(const smlm::SyntheticParams& params, const std::string& format,
              const std::string& out_path) {
  const auto syn = smlm::make_synthetic(params);
  std::ofstream out;
  open_or_throw(out, out_path);
  if (format == "dense") {
    smlm::io::write_dense(out, syn.dataset);
  } else {
    smlm::io::write_svmlight(out, syn.dataset);
  }
  std::cerr << "informative coordinates (1-based):";
  for (auto j : syn.support) std::cerr << ' ' << (j + 1);
  std::cerr << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse maximum likelihood model for F-score, AUROC and PRBEP"};
  app.require_subcommand(1);
  app.fallthrough();
  std::size_t workers = 1;
  app.add_option("--workers", workers, "Parallel workers for shards and folds")
      ->check(CLI::PositiveNumber);

  DataFlags data_flags;
  TrainFlags train_flags;

  auto* train = app.add_subcommand("train", "Fit a model");
  std::string out_model, trace_path;
  data_flags.add_to(train);
  train_flags.add_to(train, true);
  train->add_option("--out-model", out_model, "Model file to write")
      ->required();
  train->add_option("--trace", trace_path, "Objective trace to write");

  auto* predict = app.add_subcommand("predict", "Label points with a model");
  std::string model_path, pred_out;
  predict->add_option("--model", model_path, "Model file")->required();
  data_flags.add_to(predict);
  predict->add_option("--out", pred_out, "Prediction file (default stdout)");

  auto* evaluate = app.add_subcommand("evaluate", "F-score, AUROC and PRBEP");
  evaluate->add_option("--model", model_path, "Model file")->required();
  data_flags.add_to(evaluate);

  auto* cv = app.add_subcommand("cv", "k-fold cross-validation report");
  std::size_t k = 10;
  std::string out_report;
  data_flags.add_to(cv);
  train_flags.add_to(cv, true);
  cv->add_option("--k", k, "Number of folds")->check(CLI::Range(2, 1 << 30));
  cv->add_option("--out-report", out_report, "Report file to write")
      ->required();

  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset");
  smlm::SyntheticParams sp;
  std::string synth_format = "svmlight", synth_out;
  synth->add_option("--n", sp.n, "Points");
  synth->add_option("--d", sp.d, "Dimensions");
  synth->add_option("--informative", sp.informative_dims,
                    "Coordinates carrying the class signal");
  synth->add_option("--margin", sp.margin, "Gap between the classes");
  synth->add_option("--flip", sp.flip_prob, "Label flip probability");
  synth->add_option("--seed", sp.seed, "Seed");
  synth->add_option("--format", synth_format, "svmlight or dense")
      ->check(CLI::IsMember({"svmlight", "dense"}));
  synth->add_option("--out", synth_out, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*train) {
      return cmd_train(data_flags, train_flags, workers, out_model, trace_path);
    }
    if (*predict) return cmd_predict(data_flags, model_path, pred_out);
    if (*evaluate) return cmd_evaluate(data_flags, model_path);
    if (*cv) return cmd_cv(data_flags, train_flags, workers, k, out_report);
    if (*synth) return cmd_synth(sp, synth_format, synth_out);
  } catch (const smlm::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const smlm::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const smlm::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
