#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rbnn/gaussian.hpp"
#include "rbnn/random.hpp"

namespace rbnn {

// Variational parameters of one dense layer. Every scalar weight and bias has
// an independent Gaussian posterior N(mean, softplus(rho)^2); rho is the
// unconstrained parameter actually optimized. Weight matrices are row-major
// (fan_in x fan_out).
struct LayerVariational {
  std::size_t fan_in = 0;
  std::size_t fan_out = 0;
  std::vector<double> weight_mean;
  std::vector<double> weight_rho;
  std::vector<double> bias_mean;
  std::vector<double> bias_rho;

  std::size_t weight_count() const { return fan_in * fan_out; }
  std::size_t param_count() const { return weight_count() + fan_out; }
};

// Feed-forward binary classifier with ReLU hidden layers and a sigmoid output
// node. The prior over every scalar parameter is the standard normal N(0, 1),
// shared and fixed (never trained).
//
// Flat parameter order (used by noise vectors, gradients, and the optimizer):
// layer by layer, weights row-major first, then biases.
struct BnnClassifier {
  std::vector<LayerVariational> layers;

  std::size_t input_dim() const { return layers.front().fan_in; }
  std::size_t param_count() const;
  std::vector<std::size_t> layer_sizes() const;
};

// Initial sigma of every parameter: softplus(rho0) = 0.05.
inline constexpr double kInitSigma = 0.05;

// Fresh model for the given architecture (e.g. {8, 12, 1}): weight and bias
// means drawn from N(0, 0.1^2) on stream (seed, 1), all rho set so that
// sigma = kInitSigma. The output layer must have a single node.
BnnClassifier init_model(std::span<const std::size_t> layer_sizes, std::uint64_t seed);

// Variational posterior of the full flat parameter vector: means as stored,
// stddev = softplus(rho).
DiagonalGaussian posterior_over_parameters(const BnnClassifier& model);

// One concrete network drawn from the posterior.
struct NetworkRealization {
  struct Layer {
    std::vector<double> weights;  // row-major fan_in x fan_out
    std::vector<double> biases;
  };
  std::vector<Layer> layers;
};

// Realizes weights = mean + softplus(rho) * eps; eps is in flat parameter
// order with one entry per scalar parameter.
NetworkRealization realize(const BnnClassifier& model, std::span<const double> eps);

// Prediction score in (0, 1) of a realized network on one feature row.
double forward_realized(const NetworkRealization& net, std::span<const double> x);

// Reparameterized stochastic forward pass: realize with eps, then run the
// network. Deterministic given (model, x, eps).
double forward_sampled(const BnnClassifier& model, std::span<const double> x,
                       std::span<const double> eps);

// S independent posterior draws of the whole network; draw s consumes child
// stream s of rng, so samples can be generated in parallel and the list is
// reproducible.
std::vector<NetworkRealization> sample_posterior(const BnnClassifier& model,
                                                 std::size_t num_samples,
                                                 RandomSource& rng);

// Posterior mean and stddev per layer, heatmap-ready (Fig. 3 style).
struct LayerSummary {
  std::size_t fan_in = 0;
  std::size_t fan_out = 0;
  std::vector<double> weight_mean;
  std::vector<double> weight_stddev;
  std::vector<double> bias_mean;
  std::vector<double> bias_stddev;
};

std::vector<LayerSummary> weight_summary(const BnnClassifier& model);

// Histogram of the variational means per parameter group (w0, b0, w1, b1, ...)
// with the N(0, 1) prior density evaluated at bin centers, for prior-vs-
// posterior density plots (Fig. 2 style).
struct DensityBin {
  double center = 0.0;
  std::size_t count = 0;
  double prior_density = 0.0;
};

struct GroupDensity {
  std::string group;  // "w0", "b0", "w1", ...
  std::vector<DensityBin> bins;
};

std::vector<GroupDensity> prior_posterior_density(const BnnClassifier& model,
                                                  std::size_t bins);

}  // namespace rbnn
