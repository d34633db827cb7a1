#pragma once

#include <vector>

#include "rbnn/model.hpp"
#include "rbnn/random.hpp"
#include "rbnn/table.hpp"

namespace rbnn {

// ELBO decomposition for one batch:
//   elbo = likelihood - kl_scale * kl
// likelihood is the Monte-Carlo average over S weight draws of the summed
// Bernoulli log-likelihood; kl is the closed-form KL of the full parameter
// posterior against the N(0, 1) prior and involves no sampling.
struct ElboTerms {
  double elbo = 0.0;
  double likelihood = 0.0;
  double kl = 0.0;
};

// One standard-normal draw per parameter per Monte-Carlo sample, flat
// parameter order (see BnnClassifier).
using NoiseDraws = std::vector<std::vector<double>>;

// S noise vectors; sample s comes from child stream s of rng.
NoiseDraws draw_noise(const BnnClassifier& model, std::size_t num_samples,
                      RandomSource& rng);

// Deterministic ELBO under explicit noise (the test- and gradient-check
// surface; elbo_estimate wires fresh noise into it).
ElboTerms elbo_with_noise(const BnnClassifier& model, const LabeledTable& batch,
                          const NoiseDraws& noise, double kl_scale);

ElboTerms elbo_estimate(const BnnClassifier& model, const LabeledTable& batch,
                        RandomSource& rng, std::size_t num_samples, double kl_scale);

// Gradient with the same shape as the variational parameters.
struct LayerGradient {
  std::vector<double> weight_mean;
  std::vector<double> weight_rho;
  std::vector<double> bias_mean;
  std::vector<double> bias_rho;
};

struct ElboGradient {
  ElboTerms terms;
  std::vector<LayerGradient> layers;
};

// Exact pathwise (reparameterization) gradient of elbo_with_noise for the
// same noise: backpropagation through sigmoid, ReLU (subgradient 0 at 0), the
// affine layers and w = mean + softplus(rho) * eps, plus the analytic KL
// gradient. Matches central finite differences of elbo_with_noise.
ElboGradient elbo_gradient_with_noise(const BnnClassifier& model,
                                      const LabeledTable& batch,
                                      const NoiseDraws& noise, double kl_scale);

ElboGradient elbo_gradient(const BnnClassifier& model, const LabeledTable& batch,
                           RandomSource& rng, std::size_t num_samples,
                           double kl_scale);

}  // namespace rbnn
