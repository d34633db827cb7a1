#include "rbnn/importance.hpp"

#include <algorithm>
#include <cmath>

#include "rbnn/errors.hpp"

namespace rbnn {

namespace {

constexpr std::uint64_t kPosteriorStream = 0;
constexpr std::uint64_t kShuffleStream = 1;

LabeledTable with_permuted_column(const LabeledTable& table, std::size_t column,
                                  std::span<const std::size_t> perm) {
  LabeledTable out = table;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    out.at(r, column) = table.at(perm[r], column);
  }
  return out;
}

double weighted_f1(const PredictionDistribution& dist, std::span<const int> labels,
                   double threshold) {
  const auto predicted = classify(dist, threshold);
  return classification_report(confusion_matrix(predicted, labels)).weighted.f1;
}

ClassUncertainty class_uncertainty(const PredictionDistribution& dist,
                                   double threshold) {
  double sum[2] = {0.0, 0.0};
  std::size_t count[2] = {0, 0};
  for (std::size_t r = 0; r < dist.num_examples; ++r) {
    const int cls = dist.mean_score[r] >= threshold ? 1 : 0;
    sum[cls] += dist.std_score[r];
    ++count[cls];
  }
  ClassUncertainty out;
  if (count[1] > 0) {
    out.propagated = sum[1] / static_cast<double>(count[1]);
  }
  if (count[0] > 0) {
    out.arrested = sum[0] / static_cast<double>(count[0]);
  }
  return out;
}

}  // namespace

std::vector<ImportanceRow> permutation_importance_with_perms(
    const BnnClassifier& model, const LabeledTable& test, double threshold,
    std::size_t num_samples, RandomSource& rng, std::size_t repeats,
    const PermutationProvider& permutation_for) {
  if (repeats < 1) {
    throw Error("permutation_importance: repeats must be at least 1");
  }
  if (test.cols() != model.input_dim()) {
    throw DimensionError("permutation_importance: feature count mismatch");
  }

  RandomSource posterior_rng = rng.child(kPosteriorStream);
  const auto nets = sample_posterior(model, num_samples, posterior_rng);

  const auto baseline = predict_with_realizations(nets, test);
  const double baseline_f1 = weighted_f1(baseline, test.labels, threshold);

  std::vector<ImportanceRow> rows(test.cols());
  for (std::size_t f = 0; f < test.cols(); ++f) {
    ImportanceRow& row = rows[f];
    row.feature = test.feature_names[f];
    row.baseline_f1 = baseline_f1;

    std::vector<double> f1s;
    f1s.reserve(repeats);
    double unc_sum[2] = {0.0, 0.0};
    std::size_t unc_count[2] = {0, 0};
    for (std::size_t rep = 0; rep < repeats; ++rep) {
      const auto perm = permutation_for(f, rep);
      const auto shuffled = with_permuted_column(test, f, perm);
      const auto dist = predict_with_realizations(nets, shuffled);
      f1s.push_back(weighted_f1(dist, test.labels, threshold));
      const auto unc = class_uncertainty(dist, threshold);
      if (unc.propagated) {
        unc_sum[1] += *unc.propagated;
        ++unc_count[1];
      }
      if (unc.arrested) {
        unc_sum[0] += *unc.arrested;
        ++unc_count[0];
      }
    }

    double mean = 0.0;
    for (double v : f1s) {
      mean += v;
    }
    mean /= static_cast<double>(repeats);
    double var = 0.0;
    for (double v : f1s) {
      var += (v - mean) * (v - mean);
    }
    row.shuffled_f1_mean = mean;
    row.shuffled_f1_std =
        repeats > 1 ? std::sqrt(var / static_cast<double>(repeats - 1)) : 0.0;
    row.f1_drop = baseline_f1 - mean;
    if (unc_count[1] > 0) {
      row.uncertainty_propagated = unc_sum[1] / static_cast<double>(unc_count[1]);
    }
    if (unc_count[0] > 0) {
      row.uncertainty_arrested = unc_sum[0] / static_cast<double>(unc_count[0]);
    }
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const ImportanceRow& a, const ImportanceRow& b) {
                     return a.f1_drop > b.f1_drop;
                   });
  return rows;
}

std::vector<ImportanceRow> permutation_importance(const BnnClassifier& model,
                                                  const LabeledTable& test,
                                                  double threshold,
                                                  std::size_t num_samples,
                                                  RandomSource& rng,
                                                  std::size_t repeats) {
  RandomSource shuffle_root = rng.child(kShuffleStream);
  const std::size_t rows = test.rows();
  auto provider = [&shuffle_root, rows](std::size_t feature, std::size_t repeat) {
    RandomSource cell = shuffle_root.child(feature).child(repeat);
    return cell.permutation(rows);
  };
  return permutation_importance_with_perms(model, test, threshold, num_samples, rng,
                                           repeats, provider);
}

ClassUncertainty feature_uncertainty(const BnnClassifier& model,
                                     const LabeledTable& test,
                                     const std::string& feature, double threshold,
                                     std::size_t num_samples, RandomSource& rng) {
  const std::size_t column = test.feature_index(feature);  // throws if unknown
  RandomSource posterior_rng = rng.child(kPosteriorStream);
  const auto nets = sample_posterior(model, num_samples, posterior_rng);

  RandomSource cell = rng.child(kShuffleStream).child(column).child(0);
  const auto perm = cell.permutation(test.rows());
  const auto dist = predict_with_realizations(nets, with_permuted_column(test, column, perm));
  return class_uncertainty(dist, threshold);
}

void write_importance_csv(std::span<const ImportanceRow> rows,
                          const std::string& path) {
  std::string out =
      "feature,baseline_f1,shuffled_f1_mean,shuffled_f1_std,f1_drop,"
      "unc_propagated,unc_arrested\n";
  for (const auto& row : rows) {
    out += row.feature;
    out += ',';
    out += format_double(row.baseline_f1);
    out += ',';
    out += format_double(row.shuffled_f1_mean);
    out += ',';
    out += format_double(row.shuffled_f1_std);
    out += ',';
    out += format_double(row.f1_drop);
    out += ',';
    out += format_double(row.uncertainty_propagated);
    out += ',';
    out += format_double(row.uncertainty_arrested);
    out += '\n';
  }
  write_file_atomic(path, out);
}

}  // namespace rbnn
