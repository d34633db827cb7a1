#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace rbnn {

// Column order contract for the rupture dataset; CSV files may list columns
// in any order but tables always hold them in this order.
inline const std::array<std::string, 8> kRuptureFeatureNames = {
    "sxx", "syy", "sxy", "mu_d", "friction_drop", "d_c", "width", "height"};

// Name of the binary label column: 1 = rupture propagated, 0 = arrested.
inline const std::string kLabelColumnName = "rupture";

// Dense feature matrix (row-major) with binary labels and named columns.
struct LabeledTable {
  std::vector<double> features;            // rows() x cols(), row-major
  std::vector<int> labels;                 // rows(), each 0 or 1
  std::vector<std::string> feature_names;  // cols()

  std::size_t rows() const { return labels.size(); }
  std::size_t cols() const { return feature_names.size(); }

  double at(std::size_t row, std::size_t col) const {
    return features[row * cols() + col];
  }
  double& at(std::size_t row, std::size_t col) {
    return features[row * cols() + col];
  }
  std::span<const double> row(std::size_t r) const {
    return {features.data() + r * cols(), cols()};
  }

  // Index of a named feature; throws DataError if absent.
  std::size_t feature_index(const std::string& name) const;

  // New table holding the given rows (in order, duplicates allowed).
  LabeledTable take_rows(std::span<const std::size_t> indices) const;
};

// Reads a headered CSV. Columns are matched by name against expected_names
// (file order is irrelevant; the result uses contract order) plus a "rupture"
// label column with values 0/1. Errors identify the offending column or the
// row (1-based, counting the header as line 1) and column of a bad cell.
LabeledTable load_csv(const std::string& path,
                      std::span<const std::string> expected_names);

// Writes header + rows; decimals carry 17 significant digits so a
// write/load round trip is value-exact.
void write_csv(const LabeledTable& table, const std::string& path);

// Formats a double with 17 significant digits (shared by all text emitters).
std::string format_double(double value);

// Writes a whole file atomically (temp file in the same directory + rename).
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace rbnn
