#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rbnn/evaluate.hpp"
#include "rbnn/model.hpp"
#include "rbnn/random.hpp"
#include "rbnn/table.hpp"

namespace rbnn {

// Permutation importance of one feature: weighted-F1 degradation when the
// column is shuffled, with the per-predicted-class mean prediction
// uncertainty of the shuffled variants. f1_drop may be negative (a shuffle
// can help by chance) and is reported unclamped.
struct ImportanceRow {
  std::string feature;
  double baseline_f1 = 0.0;
  double shuffled_f1_mean = 0.0;
  double shuffled_f1_std = 0.0;  // over repeats; 0 when repeats == 1
  double f1_drop = 0.0;          // baseline_f1 - shuffled_f1_mean
  double uncertainty_propagated = 0.0;
  double uncertainty_arrested = 0.0;
};

// Mean std_score split by predicted class at the fixed threshold; a class
// with no predictions reports no value.
struct ClassUncertainty {
  std::optional<double> propagated;
  std::optional<double> arrested;
};

// Permutation provider seam: returns the row permutation to apply for a given
// (feature, repeat) cell. Tests use this to force identity permutations.
using PermutationProvider =
    std::function<std::vector<std::size_t>(std::size_t feature, std::size_t repeat)>;

// One row per feature, sorted by f1_drop descending (ties keep column order).
// The threshold comes from the unshuffled evaluation and is NOT re-optimized
// per shuffle. One posterior sample set (child stream 0 of rng) is shared by
// the baseline and every shuffle, so an identity permutation reproduces the
// baseline exactly; the (feature, repeat) cell draws its permutation from
// child stream (1, feature, repeat). Per-class uncertainties are averaged
// over the repeats in which the class is nonempty.
std::vector<ImportanceRow> permutation_importance(const BnnClassifier& model,
                                                  const LabeledTable& test,
                                                  double threshold,
                                                  std::size_t num_samples,
                                                  RandomSource& rng,
                                                  std::size_t repeats);

// Same computation with caller-supplied permutations.
std::vector<ImportanceRow> permutation_importance_with_perms(
    const BnnClassifier& model, const LabeledTable& test, double threshold,
    std::size_t num_samples, RandomSource& rng, std::size_t repeats,
    const PermutationProvider& permutation_for);

// Shuffles one feature (stream (1, feature, 0)), predicts, and averages the
// per-example std_score within each predicted class at the fixed threshold.
ClassUncertainty feature_uncertainty(const BnnClassifier& model,
                                     const LabeledTable& test,
                                     const std::string& feature, double threshold,
                                     std::size_t num_samples, RandomSource& rng);

// CSV with header feature,baseline_f1,shuffled_f1_mean,shuffled_f1_std,
// f1_drop,unc_propagated,unc_arrested.
void write_importance_csv(std::span<const ImportanceRow> rows,
                          const std::string& path);

}  // namespace rbnn
