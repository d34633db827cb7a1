#include "rbnn/dataset.hpp"

#include <string>

#include "rbnn/errors.hpp"

namespace rbnn {

TrainTestSplit split(const LabeledTable& table, std::size_t train_count,
                     RandomSource& rng) {
  if (train_count == 0 || train_count >= table.rows()) {
    throw DataError("split: train_count must be in (0, rows); got " +
                    std::to_string(train_count) + " of " +
                    std::to_string(table.rows()));
  }
  const auto order = rng.permutation(table.rows());
  const std::span<const std::size_t> all(order);
  return {table.take_rows(all.subspan(0, train_count)),
          table.take_rows(all.subspan(train_count))};
}

LabeledTable upsample_minority(const LabeledTable& train, RandomSource& rng) {
  std::vector<std::size_t> by_class[2];
  for (std::size_t r = 0; r < train.rows(); ++r) {
    by_class[train.labels[r]].push_back(r);
  }
  if (by_class[0].empty() || by_class[1].empty()) {
    throw DataError("upsample_minority: both classes must be present");
  }
  if (by_class[0].size() == by_class[1].size()) {
    return train;
  }
  const int minority = by_class[1].size() < by_class[0].size() ? 1 : 0;
  const auto& pool = by_class[minority];
  const std::size_t deficit = by_class[1 - minority].size() - pool.size();

  std::vector<std::size_t> indices(train.rows());
  for (std::size_t r = 0; r < train.rows(); ++r) {
    indices[r] = r;
  }
  for (std::size_t i = 0; i < deficit; ++i) {
    indices.push_back(pool[rng.uniform_below(pool.size())]);
  }
  return train.take_rows(indices);
}

}  // namespace rbnn
