#pragma once

#include <vector>

#include "rbnn/table.hpp"

namespace rbnn {

// Per-column z-score transform. Statistics must come from training data only;
// test tables are transformed with the training-set standardizer.
struct Standardizer {
  std::vector<double> means;
  std::vector<double> stds;  // strictly positive
};

// Column means and standard deviations (population form, 1/N denominator).
// A constant column cannot be standardized; the error names it.
Standardizer fit_standardizer(const LabeledTable& train);

// (x - mean) / std per column; labels and names are carried through.
LabeledTable apply_standardizer(const Standardizer& s, const LabeledTable& table);

// Inverse transform: x * std + mean.
LabeledTable invert_standardizer(const Standardizer& s, const LabeledTable& table);

}  // namespace rbnn
