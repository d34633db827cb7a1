#pragma once

#include <array>
#include <span>

#include "rbnn/random.hpp"
#include "rbnn/table.hpp"

namespace rbnn {

// Knobs of the synthetic label rule; defaults give a ~40% propagated class.
struct GeneratorConfig {
  double s_crit = 1.5;         // propagation margin, in units of 10 MPa
  double geom_coupling = 0.3;  // slope-coupled share of sxx in the normal stress
  double energy_coeff = 4.0;   // fracture-energy penalty coefficient
};

// Sampling ranges for the eight features, aligned with kRuptureFeatureNames.
// Stresses are in MPa with compression negative; width/height in km; d_c in m.
inline constexpr std::array<std::pair<double, double>, 8> kFeatureRanges = {{
    {-120.0, -60.0},  // sxx
    {-120.0, -60.0},  // syy
    {20.0, 70.0},     // sxy
    {0.2, 0.6},       // mu_d
    {0.1, 0.5},       // friction_drop
    {0.1, 0.8},       // d_c
    {2.0, 6.0},       // width
    {0.1, 1.0},       // height
}};

// Deterministic label rule, a stand-in for full rupture simulations. With
// slope s = 2*height/width and effective normal stress
//
//   sigma_n = -(0.5*(sxx + syy) + geom_coupling * s * sxx)      [MPa]
//
// the rupture potential combines the dynamic stress drop, a confinement
// penalty that makes mean compression the dominant control, and a
// slope-scaled fracture-energy cost:
//
//   drop     = sxy - mu_d * sigma_n
//   confine  = 2.0 * (sigma_n - 100.0)
//   fracture = energy_coeff/4 * friction_drop * d_c * s * sigma_n
//   phi      = drop - confine - fracture
//
// and the rupture propagates (label 1) iff phi > 10 * s_crit. The label is a
// pure function of the feature row; increasing sxy can only turn an arrest
// into a propagation, never the reverse.
int rupture_label(std::span<const double> features, const GeneratorConfig& config);

// n rows with features drawn uniformly from kFeatureRanges and labels from
// rupture_label. Row i consumes child stream i of rng (one uniform per
// feature, contract order), so generation is reproducible and row-parallel.
LabeledTable generate_synthetic(std::size_t n, RandomSource& rng,
                                const GeneratorConfig& config = {});

}  // namespace rbnn
