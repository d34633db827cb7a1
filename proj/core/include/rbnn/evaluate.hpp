#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rbnn/model.hpp"
#include "rbnn/random.hpp"
#include "rbnn/table.hpp"

namespace rbnn {

// Posterior prediction scores: row s holds the scores of every example under
// posterior draw s. std_score (sample std over draws, 1/(S-1)) is the
// per-example uncertainty.
struct PredictionDistribution {
  std::size_t num_samples = 0;
  std::size_t num_examples = 0;
  std::vector<double> scores;      // num_samples x num_examples, row-major
  std::vector<double> mean_score;  // per example
  std::vector<double> std_score;   // per example

  double score(std::size_t sample, std::size_t example) const {
    return scores[sample * num_examples + example];
  }
};

// Scores every row of table under num_samples posterior draws (draw s from
// child stream s of rng). Requires num_samples >= 2.
PredictionDistribution predict_distribution(const BnnClassifier& model,
                                            const LabeledTable& table,
                                            std::size_t num_samples,
                                            RandomSource& rng);

// Same, under a fixed list of already-drawn networks (lets callers reuse one
// posterior sample set across many feature variants).
PredictionDistribution predict_with_realizations(
    const std::vector<NetworkRealization>& nets, const LabeledTable& table);

struct ThresholdResult {
  double threshold = 0.0;
  double f1 = 0.0;  // F1 of the propagated (positive) class at the threshold
};

// Exact F1-maximizing threshold over candidates {0, midpoints of consecutive
// distinct sorted scores, 1}; classification is score >= threshold. Ties go
// to the smallest threshold. Requires both classes present.
ThresholdResult optimal_threshold(std::span<const double> mean_scores,
                                  std::span<const int> labels);

// Label 1 iff mean score >= threshold.
std::vector<int> classify(std::span<const double> mean_scores, double threshold);
std::vector<int> classify(const PredictionDistribution& dist, double threshold);

// Counts by (actual, predicted) pair; "arrested" is class 0, "propagated" 1.
struct ConfusionCounts {
  std::size_t correct_arrested = 0;        // actual 0, predicted 0
  std::size_t arrested_as_propagated = 0;  // actual 0, predicted 1
  std::size_t propagated_as_arrested = 0;  // actual 1, predicted 0
  std::size_t correct_propagated = 0;      // actual 1, predicted 1

  std::size_t total() const {
    return correct_arrested + arrested_as_propagated + propagated_as_arrested +
           correct_propagated;
  }
};

ConfusionCounts confusion_matrix(std::span<const int> predicted,
                                 std::span<const int> actual);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct ClassificationReport {
  ClassMetrics arrested;
  ClassMetrics propagated;
  ClassMetrics weighted;  // support-weighted averages; support = total
  std::vector<std::string> warnings;  // degenerate zero-denominator cases
};

// Precision/recall/F1 per class plus the support-weighted average row. Zero
// denominators yield 0 and a warning instead of NaN.
ClassificationReport classification_report(const ConfusionCounts& counts);

// Equal-width histogram over [0, 1] of mean scores; empty bins have count 0
// and no mean_std.
struct HistogramBin {
  double center = 0.0;
  std::size_t count = 0;
  std::optional<double> mean_std;  // mean per-example std within the bin
};

std::vector<HistogramBin> uncertainty_histogram(const PredictionDistribution& dist,
                                                std::size_t bins);

// JSON evaluation report (threshold, confusion, per-class metrics, weighted
// averages, histogram rows) and the histogram CSV (bin_center,count,mean_std).
std::string evaluation_report_json(const ThresholdResult& threshold,
                                   const ConfusionCounts& counts,
                                   const ClassificationReport& report,
                                   std::span<const HistogramBin> histogram);

void write_histogram_csv(std::span<const HistogramBin> histogram,
                         const std::string& path);

}  // namespace rbnn
