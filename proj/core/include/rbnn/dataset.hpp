#pragma once

#include "rbnn/random.hpp"
#include "rbnn/table.hpp"

namespace rbnn {

struct TrainTestSplit {
  LabeledTable train;
  LabeledTable test;
};

// Uniform shuffle, then the first train_count rows become the training set.
// Requires 0 < train_count < rows; deterministic given the source.
TrainTestSplit split(const LabeledTable& table, std::size_t train_count,
                     RandomSource& rng);

// Appends minority-class rows resampled with replacement until both classes
// have equal counts. All original rows are retained; an already balanced
// table is returned unchanged. Requires both classes present.
LabeledTable upsample_minority(const LabeledTable& train, RandomSource& rng);

}  // namespace rbnn
