#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rbnn/model.hpp"
#include "rbnn/standardize.hpp"

namespace rbnn {

inline constexpr int kCheckpointFormatVersion = 1;

// Everything needed to reload a trained pipeline: the variational parameters,
// the training-set standardizer, the feature-name contract, and the split
// provenance that lets an evaluation rebuild the exact test fold. Standardizer
// and split info are optional for bare model snapshots.
//
// On disk this is a JSON document (see docs/checkpoint_schema.md); all decimal
// arrays are written with 17 significant digits, so save/load round-trips are
// bit-exact.
struct Checkpoint {
  BnnClassifier model;
  std::optional<Standardizer> standardizer;
  std::vector<std::string> feature_names;  // empty when not embedded
  std::optional<std::uint64_t> split_seed;
  std::optional<std::size_t> split_train_count;
};

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);

// Bare model snapshot (no standardizer, names, or split info).
void save_checkpoint(const BnnClassifier& model, const std::string& path);

// Throws CheckpointError on unreadable/malformed files, version mismatches,
// or internally inconsistent shapes.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace rbnn
