#include "rbnn/evaluate.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "rbnn/errors.hpp"

namespace rbnn {

PredictionDistribution predict_with_realizations(
    const std::vector<NetworkRealization>& nets, const LabeledTable& table) {
  if (nets.size() < 2) {
    throw Error("predict: need at least 2 posterior samples");
  }
  if (table.rows() == 0) {
    throw DataError("predict: empty table");
  }
  PredictionDistribution dist;
  dist.num_samples = nets.size();
  dist.num_examples = table.rows();
  dist.scores.resize(dist.num_samples * dist.num_examples);
  for (std::size_t s = 0; s < nets.size(); ++s) {
    double* row = dist.scores.data() + s * dist.num_examples;
    for (std::size_t r = 0; r < table.rows(); ++r) {
      row[r] = forward_realized(nets[s], table.row(r));
    }
  }

  dist.mean_score.assign(dist.num_examples, 0.0);
  dist.std_score.assign(dist.num_examples, 0.0);
  for (std::size_t s = 0; s < dist.num_samples; ++s) {
    const double* row = dist.scores.data() + s * dist.num_examples;
    for (std::size_t r = 0; r < dist.num_examples; ++r) {
      dist.mean_score[r] += row[r];
    }
  }
  for (double& m : dist.mean_score) {
    m /= static_cast<double>(dist.num_samples);
  }
  for (std::size_t s = 0; s < dist.num_samples; ++s) {
    const double* row = dist.scores.data() + s * dist.num_examples;
    for (std::size_t r = 0; r < dist.num_examples; ++r) {
      const double d = row[r] - dist.mean_score[r];
      dist.std_score[r] += d * d;
    }
  }
  for (double& sd : dist.std_score) {
    sd = std::sqrt(sd / static_cast<double>(dist.num_samples - 1));
  }
  return dist;
}

PredictionDistribution predict_distribution(const BnnClassifier& model,
                                            const LabeledTable& table,
                                            std::size_t num_samples,
                                            RandomSource& rng) {
  if (num_samples < 2) {
    throw Error("predict_distribution: need at least 2 samples");
  }
  if (table.cols() != model.input_dim()) {
    throw DimensionError("predict_distribution: table has " +
                         std::to_string(table.cols()) + " features, model expects " +
                         std::to_string(model.input_dim()));
  }
  return predict_with_realizations(sample_posterior(model, num_samples, rng), table);
}

ThresholdResult optimal_threshold(std::span<const double> mean_scores,
                                  std::span<const int> labels) {
  if (mean_scores.size() != labels.size()) {
    throw DimensionError("optimal_threshold: scores and labels differ in length");
  }
  const std::size_t n = labels.size();
  std::size_t positives = 0;
  for (int y : labels) {
    positives += static_cast<std::size_t>(y);
  }
  if (positives == 0 || positives == n) {
    throw DataError("optimal_threshold: both classes must be present");
  }

  // Sort examples by score; sweep candidates in ascending order so the first
  // strict improvement keeps the smallest optimal threshold.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    order[i] = i;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return mean_scores[a] < mean_scores[b];
  });

  // At threshold t, predicted positive = {score >= t}.
  auto f1_at = [&](std::size_t tp, std::size_t fp) {
    const std::size_t fn = positives - tp;
    const std::size_t denom = 2 * tp + fp + fn;
    return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
  };

  std::size_t tp = positives;  // threshold 0: everything predicted positive
  std::size_t fp = n - positives;
  ThresholdResult best{0.0, f1_at(tp, fp)};

  std::size_t i = 0;
  while (i < n) {
    const double value = mean_scores[order[i]];
    // Drop every example tied at this score from the predicted-positive set.
    while (i < n && mean_scores[order[i]] == value) {
      if (labels[order[i]] == 1) {
        --tp;
      } else {
        --fp;
      }
      ++i;
    }
    const double candidate =
        i < n ? 0.5 * (value + mean_scores[order[i]]) : 1.0;
    const double f1 = f1_at(tp, fp);
    if (f1 > best.f1) {
      best = {candidate, f1};
    }
  }
  return best;
}

std::vector<int> classify(std::span<const double> mean_scores, double threshold) {
  std::vector<int> labels(mean_scores.size());
  for (std::size_t i = 0; i < mean_scores.size(); ++i) {
    labels[i] = mean_scores[i] >= threshold ? 1 : 0;
  }
  return labels;
}

std::vector<int> classify(const PredictionDistribution& dist, double threshold) {
  return classify(dist.mean_score, threshold);
}

ConfusionCounts confusion_matrix(std::span<const int> predicted,
                                 std::span<const int> actual) {
  if (predicted.size() != actual.size()) {
    throw DimensionError("confusion_matrix: length mismatch");
  }
  ConfusionCounts counts;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (actual[i] == 0) {
      ++(predicted[i] == 0 ? counts.correct_arrested : counts.arrested_as_propagated);
    } else {
      ++(predicted[i] == 1 ? counts.correct_propagated : counts.propagated_as_arrested);
    }
  }
  return counts;
}

ClassificationReport classification_report(const ConfusionCounts& counts) {
  ClassificationReport report;
  const std::size_t total = counts.total();
  if (total == 0) {
    throw DataError("classification_report: no examples");
  }

  auto metrics = [&report](const char* name, std::size_t correct,
                           std::size_t predicted, std::size_t actual) {
    ClassMetrics m;
    m.support = actual;
    if (predicted == 0) {
      report.warnings.push_back(std::string("precision undefined for class ") + name +
                                " (no predictions); reported as 0");
    } else {
      m.precision = static_cast<double>(correct) / static_cast<double>(predicted);
    }
    if (actual == 0) {
      report.warnings.push_back(std::string("recall undefined for class ") + name +
                                " (no examples); reported as 0");
    } else {
      m.recall = static_cast<double>(correct) / static_cast<double>(actual);
    }
    if (m.precision + m.recall > 0.0) {
      m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    }
    return m;
  };

  report.arrested = metrics("arrested", counts.correct_arrested,
                            counts.correct_arrested + counts.propagated_as_arrested,
                            counts.correct_arrested + counts.arrested_as_propagated);
  report.propagated = metrics("propagated", counts.correct_propagated,
                              counts.correct_propagated + counts.arrested_as_propagated,
                              counts.correct_propagated + counts.propagated_as_arrested);

  const double w0 = static_cast<double>(report.arrested.support);
  const double w1 = static_cast<double>(report.propagated.support);
  report.weighted.support = total;
  report.weighted.precision =
      (w0 * report.arrested.precision + w1 * report.propagated.precision) / total;
  report.weighted.recall =
      (w0 * report.arrested.recall + w1 * report.propagated.recall) / total;
  report.weighted.f1 = (w0 * report.arrested.f1 + w1 * report.propagated.f1) / total;
  return report;
}

std::vector<HistogramBin> uncertainty_histogram(const PredictionDistribution& dist,
                                                std::size_t bins) {
  if (bins < 2) {
    throw Error("uncertainty_histogram: need at least 2 bins");
  }
  std::vector<HistogramBin> out(bins);
  std::vector<double> std_sum(bins, 0.0);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].center = (static_cast<double>(b) + 0.5) / static_cast<double>(bins);
  }
  for (std::size_t r = 0; r < dist.num_examples; ++r) {
    auto b = static_cast<std::size_t>(dist.mean_score[r] * static_cast<double>(bins));
    if (b >= bins) {
      b = bins - 1;
    }
    ++out[b].count;
    std_sum[b] += dist.std_score[r];
  }
  for (std::size_t b = 0; b < bins; ++b) {
    if (out[b].count > 0) {
      out[b].mean_std = std_sum[b] / static_cast<double>(out[b].count);
    }
  }
  return out;
}

std::string evaluation_report_json(const ThresholdResult& threshold,
                                   const ConfusionCounts& counts,
                                   const ClassificationReport& report,
                                   std::span<const HistogramBin> histogram) {
  nlohmann::json doc;
  doc["threshold"] = threshold.threshold;
  doc["f1_propagated_at_threshold"] = threshold.f1;
  doc["confusion"] = {
      {"correct_arrested", counts.correct_arrested},
      {"arrested_as_propagated", counts.arrested_as_propagated},
      {"propagated_as_arrested", counts.propagated_as_arrested},
      {"correct_propagated", counts.correct_propagated},
  };
  auto metrics_json = [](const ClassMetrics& m) {
    return nlohmann::json{{"precision", m.precision},
                          {"recall", m.recall},
                          {"f1", m.f1},
                          {"support", m.support}};
  };
  doc["per_class"] = {{"arrested", metrics_json(report.arrested)},
                      {"propagated", metrics_json(report.propagated)}};
  doc["weighted"] = metrics_json(report.weighted);
  doc["warnings"] = report.warnings;
  doc["histogram"] = nlohmann::json::array();
  for (const auto& bin : histogram) {
    nlohmann::json row{{"bin_center", bin.center}, {"count", bin.count}};
    if (bin.mean_std) {
      row["mean_std"] = *bin.mean_std;
    } else {
      row["mean_std"] = nullptr;
    }
    doc["histogram"].push_back(row);
  }
  return doc.dump(2) + "\n";
}

void write_histogram_csv(std::span<const HistogramBin> histogram,
                         const std::string& path) {
  std::string out = "bin_center,count,mean_std\n";
  for (const auto& bin : histogram) {
    out += format_double(bin.center);
    out += ',';
    out += std::to_string(bin.count);
    out += ',';
    if (bin.mean_std) {
      out += format_double(*bin.mean_std);
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

}  // namespace rbnn
