// Command-line front end: generate | train | evaluate | importance.
//
// Exit codes: 0 success, 1 data/model error, 2 usage error. Every subcommand
// is byte-deterministic in its file outputs for a fixed --seed. Options may
// also come from a config file (--config, "key = value" lines, # comments);
// explicit flags win over config values.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rbnn/checkpoint.hpp"
#include "rbnn/dataset.hpp"
#include "rbnn/elbo.hpp"
#include "rbnn/errors.hpp"
#include "rbnn/evaluate.hpp"
#include "rbnn/importance.hpp"
#include "rbnn/model.hpp"
#include "rbnn/standardize.hpp"
#include "rbnn/synthetic.hpp"
#include "rbnn/table.hpp"
#include "rbnn/train.hpp"

namespace {

using namespace rbnn;

// Top-level stream tags per subcommand stage; library streams 1 (init) and
// 2 (training noise) are reserved by the core.
constexpr std::uint64_t kGenerateStream = 10;
constexpr std::uint64_t kSplitStream = 11;
constexpr std::uint64_t kUpsampleStream = 12;
constexpr std::uint64_t kPredictStream = 13;
constexpr std::uint64_t kImportanceStream = 14;
constexpr std::uint64_t kTrainReportStream = 15;

constexpr std::size_t kUnreliableUncertaintySamples = 10;

struct GenerateArgs {
  std::size_t n = 2000;
  std::uint64_t seed = 0;
  std::string out;
  GeneratorConfig generator;
};

void run_generate(const GenerateArgs& args) {
  RandomSource rng(args.seed, kGenerateStream);
  const LabeledTable table = generate_synthetic(args.n, rng, args.generator);
  write_csv(table, args.out);

  std::size_t propagated = 0;
  for (int y : table.labels) {
    propagated += static_cast<std::size_t>(y);
  }
  const double share = 100.0 * static_cast<double>(propagated) /
                       static_cast<double>(table.rows());
  std::cout << "wrote " << table.rows() << " rows to " << args.out << " ("
            << propagated << " propagated, " << share << "%)\n";
}

struct TrainArgs {
  std::string data;
  std::string out = "checkpoint.json";
  std::string history = "history.csv";
  std::uint64_t seed = 0;
  std::size_t train_count = 1600;
  std::size_t hidden = 12;
  TrainConfig config;
};

void run_train(const TrainArgs& args) {
  const LabeledTable full = load_csv(args.data, kRuptureFeatureNames);

  RandomSource split_rng(args.seed, kSplitStream);
  const TrainTestSplit folds = split(full, args.train_count, split_rng);

  const Standardizer standardizer = fit_standardizer(folds.train);
  RandomSource upsample_rng(args.seed, kUpsampleStream);
  const LabeledTable balanced = upsample_minority(folds.train, upsample_rng);
  const LabeledTable train_std = apply_standardizer(standardizer, balanced);

  const std::vector<std::size_t> sizes = {full.cols(), args.hidden, 1};
  const BnnClassifier initial = init_model(sizes, args.seed);

  TrainConfig config = args.config;
  config.seed = args.seed;
  TrainResult result = train(initial, train_std, config);

  Checkpoint checkpoint{std::move(result.model), standardizer, full.feature_names,
                        args.seed, args.train_count};
  save_checkpoint(checkpoint, args.out);

  std::string history = "epoch,elbo,ll,kl,lr\n";
  for (const auto& record : result.history) {
    history += std::to_string(record.epoch);
    history += ',';
    history += format_double(record.elbo);
    history += ',';
    history += format_double(record.likelihood);
    history += ',';
    history += format_double(record.kl);
    history += ',';
    history += format_double(record.learning_rate);
    history += '\n';
  }
  write_file_atomic(args.history, history);

  // Training-set fit at the conventional 0.5 threshold, as a quick sanity
  // signal; the evaluate subcommand owns the real test metrics.
  RandomSource report_rng(args.seed, kTrainReportStream);
  const auto dist = predict_distribution(checkpoint.model, train_std, 100, report_rng);
  const auto predicted = classify(dist, 0.5);
  const auto report = classification_report(confusion_matrix(predicted, train_std.labels));
  std::cout << "wrote checkpoint to " << args.out << " and history to "
            << args.history << "\n";
  std::cout << "final train weighted F1 at threshold 0.5: " << report.weighted.f1
            << "\n";
}

struct EvalArgs {
  std::string checkpoint;
  std::string data;
  std::string test;
  std::string out = "evaluation.json";
  std::string histogram = "histogram.csv";
  std::size_t samples = 1000;
  std::size_t bins = 20;
  std::uint64_t seed = 0;
  double threshold_override = -1.0;  // < 0 = optimize on the test labels
};

// Loads the checkpoint and rebuilds the standardized test fold, either from
// an explicit --test CSV or by replaying the recorded split on --data.
struct EvalInputs {
  Checkpoint checkpoint;
  LabeledTable test_std;  // standardized features, original labels
};

EvalInputs prepare_eval_inputs(const std::string& checkpoint_path,
                               const std::string& data_path,
                               const std::string& test_path) {
  EvalInputs inputs{load_checkpoint(checkpoint_path), {}};

  std::span<const std::string> names(kRuptureFeatureNames);
  if (!inputs.checkpoint.feature_names.empty()) {
    names = inputs.checkpoint.feature_names;
  }

  LabeledTable test;
  if (!test_path.empty()) {
    test = load_csv(test_path, names);
  } else {
    if (!inputs.checkpoint.split_seed || !inputs.checkpoint.split_train_count) {
      throw DataError(
          "checkpoint carries no split record; pass --test with an explicit "
          "test CSV");
    }
    const LabeledTable full = load_csv(data_path, names);
    RandomSource split_rng(*inputs.checkpoint.split_seed, kSplitStream);
    test = split(full, *inputs.checkpoint.split_train_count, split_rng).test;
  }

  if (inputs.checkpoint.standardizer) {
    inputs.test_std = apply_standardizer(*inputs.checkpoint.standardizer, test);
  } else {
    std::cerr << "note: checkpoint has no standardizer; using features as-is\n";
    inputs.test_std = std::move(test);
  }
  return inputs;
}

void run_evaluate(const EvalArgs& args) {
  if (args.samples < kUnreliableUncertaintySamples) {
    std::cerr << "warning: only " << args.samples
              << " posterior samples; uncertainty estimates are unreliable\n";
  }
  EvalInputs inputs = prepare_eval_inputs(args.checkpoint, args.data, args.test);

  RandomSource rng(args.seed, kPredictStream);
  const auto dist =
      predict_distribution(inputs.checkpoint.model, inputs.test_std, args.samples, rng);

  ThresholdResult threshold;
  if (args.threshold_override >= 0.0) {
    threshold.threshold = args.threshold_override;
    // F1 at the forced threshold, for the report.
    const auto predicted = classify(dist, threshold.threshold);
    threshold.f1 = classification_report(
                       confusion_matrix(predicted, inputs.test_std.labels))
                       .propagated.f1;
  } else {
    threshold = optimal_threshold(dist.mean_score, inputs.test_std.labels);
  }

  const auto predicted = classify(dist, threshold.threshold);
  const auto counts = confusion_matrix(predicted, inputs.test_std.labels);
  const auto report = classification_report(counts);
  const auto histogram = uncertainty_histogram(dist, args.bins);

  const std::string json =
      evaluation_report_json(threshold, counts, report, histogram);
  write_file_atomic(args.out, json);
  write_histogram_csv(histogram, args.histogram);
  for (const auto& warning : report.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
  std::cout << json;
}

struct ImportanceArgs {
  std::string checkpoint;
  std::string data;
  std::string test;
  std::string out = "importance.csv";
  std::size_t samples = 1000;
  std::size_t repeats = 10;
  std::uint64_t seed = 0;
  double threshold_override = -1.0;
};

void run_importance(const ImportanceArgs& args) {
  EvalInputs inputs = prepare_eval_inputs(args.checkpoint, args.data, args.test);

  RandomSource rng(args.seed, kImportanceStream);
  double threshold = args.threshold_override;
  if (threshold < 0.0) {
    // Baseline evaluation with the same posterior sample set the importance
    // engine will reuse (child stream 0).
    RandomSource baseline_rng = rng.child(0);
    const auto baseline = predict_distribution(inputs.checkpoint.model,
                                               inputs.test_std, args.samples,
                                               baseline_rng);
    threshold =
        optimal_threshold(baseline.mean_score, inputs.test_std.labels).threshold;
  }

  const auto rows = permutation_importance(inputs.checkpoint.model, inputs.test_std,
                                           threshold, args.samples, rng,
                                           args.repeats);
  write_importance_csv(rows, args.out);

  std::cout << "threshold " << threshold << ", baseline weighted F1 "
            << rows.front().baseline_f1 << "\n";
  for (const auto& row : rows) {
    std::cout << row.feature << ": f1_drop " << row.f1_drop << " (shuffled "
              << row.shuffled_f1_mean << " +- " << row.shuffled_f1_std << ")\n";
  }
  std::cout << "wrote " << rows.size() << " rows to " << args.out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational Bayesian neural network pipeline for earthquake "
               "rupture classification"};
  app.require_subcommand(1);

  GenerateArgs gen_args;
  auto* generate = app.add_subcommand(
      "generate", "Write a synthetic labeled rupture dataset as CSV");
  generate->set_config("--config");
  generate->add_option("--n", gen_args.n, "Number of rows")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  generate->add_option("--seed", gen_args.seed, "Random seed")->capture_default_str();
  generate->add_option("--out", gen_args.out, "Output CSV path")->required();
  generate->add_option("--s_crit", gen_args.generator.s_crit, "Propagation margin")
      ->capture_default_str();
  generate
      ->add_option("--geom_coupling", gen_args.generator.geom_coupling,
                   "Slope coupling of sxx into the normal stress")
      ->capture_default_str();
  generate
      ->add_option("--energy_coeff", gen_args.generator.energy_coeff,
                   "Fracture-energy penalty coefficient")
      ->capture_default_str();
  generate->callback([&] { run_generate(gen_args); });

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand(
      "train", "Split, standardize, upsample, and train the classifier");
  train_cmd->set_config("--config");
  train_cmd->add_option("--data", train_args.data, "Labeled CSV")->required();
  train_cmd->add_option("--seed", train_args.seed, "Random seed")
      ->capture_default_str();
  train_cmd->add_option("--out", train_args.out, "Checkpoint path")
      ->capture_default_str();
  train_cmd->add_option("--history", train_args.history, "Training history CSV path")
      ->capture_default_str();
  train_cmd
      ->add_option("--train_count", train_args.train_count,
                   "Rows assigned to the training fold")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--hidden", train_args.hidden, "Hidden layer width")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--epochs", train_args.config.epochs, "Training epochs")
      ->capture_default_str();
  train_cmd
      ->add_option("--learning_rate", train_args.config.initial_learning_rate,
                   "Initial Adam learning rate")
      ->capture_default_str();
  train_cmd
      ->add_option("--decay_rate", train_args.config.decay_rate,
                   "Per-epoch exponential learning-rate decay")
      ->capture_default_str();
  train_cmd
      ->add_option("--batch_size", train_args.config.batch_size,
                   "Minibatch size (0 = full batch)")
      ->capture_default_str();
  train_cmd
      ->add_option("--mc_samples", train_args.config.elbo_mc_samples,
                   "Monte-Carlo samples per ELBO step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  double kl_scale_flag = -1.0;
  train_cmd
      ->add_option("--kl_scale", kl_scale_flag,
                   "KL weight in the ELBO (default 1/num_batches)")
      ->capture_default_str();
  train_cmd->callback([&] {
    if (kl_scale_flag >= 0.0) {
      train_args.config.kl_scale = kl_scale_flag;
    }
    run_train(train_args);
  });

  EvalArgs eval_args;
  auto* evaluate = app.add_subcommand(
      "evaluate", "Posterior predictions, optimal threshold, and report");
  evaluate->set_config("--config");
  evaluate->add_option("--checkpoint", eval_args.checkpoint, "Checkpoint path")
      ->required();
  auto* eval_data = evaluate->add_option(
      "--data", eval_args.data, "Full CSV; the recorded split recreates the test fold");
  auto* eval_test =
      evaluate->add_option("--test", eval_args.test, "Explicit test CSV");
  eval_test->excludes(eval_data);
  evaluate->add_option("--samples", eval_args.samples, "Posterior samples")
      ->check(CLI::Range(static_cast<std::size_t>(2), static_cast<std::size_t>(1000000)))
      ->capture_default_str();
  evaluate->add_option("--bins", eval_args.bins, "Histogram bins")
      ->check(CLI::Range(static_cast<std::size_t>(2), static_cast<std::size_t>(1000000)))
      ->capture_default_str();
  evaluate->add_option("--seed", eval_args.seed, "Random seed")->capture_default_str();
  evaluate->add_option("--out", eval_args.out, "Report JSON path")
      ->capture_default_str();
  evaluate->add_option("--histogram", eval_args.histogram, "Histogram CSV path")
      ->capture_default_str();
  evaluate
      ->add_option("--threshold", eval_args.threshold_override,
                   "Fixed threshold instead of optimizing on the test labels")
      ->check(CLI::Range(0.0, 1.0));
  evaluate->callback([&] {
    if (eval_args.data.empty() && eval_args.test.empty()) {
      throw CLI::ValidationError("evaluate", "either --data or --test is required");
    }
    run_evaluate(eval_args);
  });

  ImportanceArgs imp_args;
  auto* importance = app.add_subcommand(
      "importance", "Permutation importance with per-class uncertainty");
  importance->set_config("--config");
  importance->add_option("--checkpoint", imp_args.checkpoint, "Checkpoint path")
      ->required();
  auto* imp_data = importance->add_option(
      "--data", imp_args.data, "Full CSV; the recorded split recreates the test fold");
  auto* imp_test =
      importance->add_option("--test", imp_args.test, "Explicit test CSV");
  imp_test->excludes(imp_data);
  importance->add_option("--samples", imp_args.samples, "Posterior samples")
      ->check(CLI::Range(static_cast<std::size_t>(2), static_cast<std::size_t>(1000000)))
      ->capture_default_str();
  importance->add_option("--repeats", imp_args.repeats, "Shuffles per feature")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  importance->add_option("--seed", imp_args.seed, "Random seed")
      ->capture_default_str();
  importance->add_option("--out", imp_args.out, "Importance CSV path")
      ->capture_default_str();
  importance
      ->add_option("--threshold", imp_args.threshold_override,
                   "Fixed threshold instead of optimizing on the test labels")
      ->check(CLI::Range(0.0, 1.0));
  importance->callback([&] {
    if (imp_args.data.empty() && imp_args.test.empty()) {
      throw CLI::ValidationError("importance", "either --data or --test is required");
    }
    run_importance(imp_args);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const rbnn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
