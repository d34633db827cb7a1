#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rbnn/model.hpp"
#include "rbnn/table.hpp"

namespace rbnn {

// Training hyperparameters. batch_size 0 means full batch (the default; the
// datasets here are small). kl_scale defaults to 1/num_batches so each epoch
// accounts for the full KL exactly once.
struct TrainConfig {
  double initial_learning_rate = 0.5;
  double decay_rate = 0.99;  // per-epoch exponential decay
  std::size_t epochs = 300;
  std::size_t batch_size = 0;  // 0 = full batch
  std::size_t elbo_mc_samples = 5;
  std::optional<double> kl_scale;  // default 1/num_batches
  std::uint64_t seed = 0;

  void validate() const;  // throws Error on out-of-range fields
};

struct EpochRecord {
  std::size_t epoch = 0;
  double elbo = 0.0;        // epoch mean of the per-step estimates
  double likelihood = 0.0;
  double kl = 0.0;
  double learning_rate = 0.0;
};

using TrainHistory = std::vector<EpochRecord>;

struct TrainResult {
  BnnClassifier model;
  TrainHistory history;
};

// Adam on -elbo (beta1 0.9, beta2 0.999, eps 1e-8) with learning rate
// initial * decay^epoch. The training set must already be standardized (and
// upsampled if desired). Fully deterministic given config.seed: noise comes
// from stream (seed, 2) with children per (epoch, batch, sample). A non-finite
// loss aborts with a diagnostic naming the epoch and offending term.
TrainResult train(const BnnClassifier& model, const LabeledTable& train_set,
                  const TrainConfig& config);

}  // namespace rbnn
