#include "rbnn/synthetic.hpp"

#include "rbnn/errors.hpp"

namespace rbnn {

namespace {

constexpr double kConfinementWeight = 2.0;   // per MPa of mean compression
constexpr double kReferenceStress = 100.0;   // MPa
constexpr double kFractureScale = 0.25;      // unit fracture weight at energy_coeff = 4
constexpr double kMarginPerScrit = 10.0;     // MPa of potential per unit s_crit

}  // namespace

int rupture_label(std::span<const double> features, const GeneratorConfig& config) {
  if (features.size() != kFeatureRanges.size()) {
    throw DimensionError("rupture_label: expected 8 features");
  }
  const double sxx = features[0];
  const double syy = features[1];
  const double sxy = features[2];
  const double mu_d = features[3];
  const double friction_drop = features[4];
  const double d_c = features[5];
  const double width = features[6];
  const double height = features[7];

  const double slope = 2.0 * height / width;
  const double sigma_n = -(0.5 * (sxx + syy) + config.geom_coupling * slope * sxx);
  const double drop = sxy - mu_d * sigma_n;
  const double confine = kConfinementWeight * (sigma_n - kReferenceStress);
  const double fracture =
      config.energy_coeff * kFractureScale * friction_drop * d_c * slope * sigma_n;
  const double phi = drop - confine - fracture;
  return phi > kMarginPerScrit * config.s_crit ? 1 : 0;
}

LabeledTable generate_synthetic(std::size_t n, RandomSource& rng,
                                const GeneratorConfig& config) {
  if (n < 1) {
    throw DataError("generate_synthetic: n must be at least 1");
  }
  LabeledTable table;
  table.feature_names.assign(kRuptureFeatureNames.begin(), kRuptureFeatureNames.end());
  table.features.resize(n * kRuptureFeatureNames.size());
  table.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    RandomSource row_rng = rng.child(i);
    double* row = table.features.data() + i * kFeatureRanges.size();
    for (std::size_t f = 0; f < kFeatureRanges.size(); ++f) {
      row[f] = row_rng.uniform(kFeatureRanges[f].first, kFeatureRanges[f].second);
    }
    table.labels[i] = rupture_label({row, kFeatureRanges.size()}, config);
  }
  return table;
}

}  // namespace rbnn
