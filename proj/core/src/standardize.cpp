#include "rbnn/standardize.hpp"

#include <cmath>

#include "rbnn/errors.hpp"

namespace rbnn {

Standardizer fit_standardizer(const LabeledTable& train) {
  if (train.rows() == 0) {
    throw DataError("fit_standardizer: empty table");
  }
  const std::size_t n = train.rows();
  const std::size_t f = train.cols();
  Standardizer s;
  s.means.assign(f, 0.0);
  s.stds.assign(f, 0.0);
  for (std::size_t c = 0; c < f; ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      sum += train.at(r, c);
    }
    s.means[c] = sum / static_cast<double>(n);
    double sq = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double d = train.at(r, c) - s.means[c];
      sq += d * d;
    }
    s.stds[c] = std::sqrt(sq / static_cast<double>(n));
    if (s.stds[c] <= 0.0) {
      throw DataError("fit_standardizer: constant column \"" + train.feature_names[c] + "\"");
    }
  }
  return s;
}

namespace {

void check_dims(const Standardizer& s, const LabeledTable& table, const char* op) {
  if (s.means.size() != table.cols() || s.stds.size() != table.cols()) {
    throw DimensionError(std::string(op) + ": standardizer fitted on " +
                         std::to_string(s.means.size()) + " columns, table has " +
                         std::to_string(table.cols()));
  }
}

}  // namespace

LabeledTable apply_standardizer(const Standardizer& s, const LabeledTable& table) {
  check_dims(s, table, "apply_standardizer");
  LabeledTable out = table;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t c = 0; c < out.cols(); ++c) {
      out.at(r, c) = (out.at(r, c) - s.means[c]) / s.stds[c];
    }
  }
  return out;
}

LabeledTable invert_standardizer(const Standardizer& s, const LabeledTable& table) {
  check_dims(s, table, "invert_standardizer");
  LabeledTable out = table;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t c = 0; c < out.cols(); ++c) {
      out.at(r, c) = out.at(r, c) * s.stds[c] + s.means[c];
    }
  }
  return out;
}

}  // namespace rbnn
