#include "rbnn/elbo.hpp"

#include <cmath>

#include "rbnn/errors.hpp"
#include "rbnn/gaussian.hpp"
#include "rbnn/math.hpp"

namespace rbnn {

namespace {

void check_batch(const BnnClassifier& model, const LabeledTable& batch) {
  if (batch.rows() == 0) {
    throw DataError("elbo: empty batch");
  }
  if (batch.cols() != model.input_dim()) {
    throw DimensionError("elbo: batch has " + std::to_string(batch.cols()) +
                         " features, model expects " +
                         std::to_string(model.input_dim()));
  }
}

void check_noise(const BnnClassifier& model, const NoiseDraws& noise) {
  if (noise.empty()) {
    throw Error("elbo: need at least one Monte-Carlo sample");
  }
  for (const auto& eps : noise) {
    if (eps.size() != model.param_count()) {
      throw DimensionError("elbo: noise vector length must equal parameter count");
    }
  }
}

double analytic_kl(const BnnClassifier& model) {
  const DiagonalGaussian q = posterior_over_parameters(model);
  return kl_diag_gaussian(q, DiagonalGaussian::standard(q.dim()));
}

// dL/dz at the output node; zero where the likelihood clamp is active, so the
// gradient matches the clamped value exactly.
inline double output_delta(int y, double p) {
  if (p <= kLikelihoodEps || p >= 1.0 - kLikelihoodEps) {
    return 0.0;
  }
  return static_cast<double>(y) - p;
}

}  // namespace

NoiseDraws draw_noise(const BnnClassifier& model, std::size_t num_samples,
                      RandomSource& rng) {
  NoiseDraws noise(num_samples, std::vector<double>(model.param_count()));
  for (std::size_t s = 0; s < num_samples; ++s) {
    RandomSource sample_rng = rng.child(s);
    sample_rng.fill_normal(noise[s]);
  }
  return noise;
}

ElboTerms elbo_with_noise(const BnnClassifier& model, const LabeledTable& batch,
                          const NoiseDraws& noise, double kl_scale) {
  check_batch(model, batch);
  check_noise(model, noise);

  double likelihood = 0.0;
  for (const auto& eps : noise) {
    const NetworkRealization net = realize(model, eps);
    for (std::size_t r = 0; r < batch.rows(); ++r) {
      likelihood += bernoulli_log_likelihood(batch.labels[r],
                                             forward_realized(net, batch.row(r)));
    }
  }
  likelihood /= static_cast<double>(noise.size());

  ElboTerms terms;
  terms.likelihood = likelihood;
  terms.kl = analytic_kl(model);
  terms.elbo = terms.likelihood - kl_scale * terms.kl;
  return terms;
}

ElboTerms elbo_estimate(const BnnClassifier& model, const LabeledTable& batch,
                        RandomSource& rng, std::size_t num_samples, double kl_scale) {
  return elbo_with_noise(model, batch, draw_noise(model, num_samples, rng), kl_scale);
}

ElboGradient elbo_gradient_with_noise(const BnnClassifier& model,
                                      const LabeledTable& batch,
                                      const NoiseDraws& noise, double kl_scale) {
  check_batch(model, batch);
  check_noise(model, noise);

  const std::size_t num_layers = model.layers.size();
  const double inv_samples = 1.0 / static_cast<double>(noise.size());

  ElboGradient out;
  out.layers.resize(num_layers);
  for (std::size_t l = 0; l < num_layers; ++l) {
    out.layers[l].weight_mean.assign(model.layers[l].weight_count(), 0.0);
    out.layers[l].weight_rho.assign(model.layers[l].weight_count(), 0.0);
    out.layers[l].bias_mean.assign(model.layers[l].fan_out, 0.0);
    out.layers[l].bias_rho.assign(model.layers[l].fan_out, 0.0);
  }

  // Raw gradients w.r.t. the realized weights of the current sample, plus
  // per-layer activation/delta workspaces.
  std::vector<std::vector<double>> grad_w(num_layers);
  std::vector<std::vector<double>> grad_b(num_layers);
  std::vector<std::vector<double>> pre(num_layers);
  std::vector<std::vector<double>> act(num_layers);
  std::vector<std::vector<double>> delta(num_layers);
  for (std::size_t l = 0; l < num_layers; ++l) {
    pre[l].resize(model.layers[l].fan_out);
    act[l].resize(model.layers[l].fan_out);
    delta[l].resize(model.layers[l].fan_out);
  }

  double likelihood = 0.0;
  for (const auto& eps : noise) {
    const NetworkRealization net = realize(model, eps);
    for (std::size_t l = 0; l < num_layers; ++l) {
      grad_w[l].assign(model.layers[l].weight_count(), 0.0);
      grad_b[l].assign(model.layers[l].fan_out, 0.0);
    }

    for (std::size_t r = 0; r < batch.rows(); ++r) {
      const auto x = batch.row(r);

      // Forward, keeping pre-activations for the ReLU subgradients.
      for (std::size_t l = 0; l < num_layers; ++l) {
        const auto& layer = net.layers[l];
        const std::size_t fan_out = model.layers[l].fan_out;
        const std::size_t fan_in = model.layers[l].fan_in;
        const double* input = (l == 0) ? x.data() : act[l - 1].data();
        for (std::size_t j = 0; j < fan_out; ++j) {
          pre[l][j] = layer.biases[j];
        }
        for (std::size_t i = 0; i < fan_in; ++i) {
          const double a = input[i];
          const double* w_row = layer.weights.data() + i * fan_out;
          for (std::size_t j = 0; j < fan_out; ++j) {
            pre[l][j] += a * w_row[j];
          }
        }
        const bool last = (l + 1 == num_layers);
        for (std::size_t j = 0; j < fan_out; ++j) {
          act[l][j] = last ? sigmoid(pre[l][j]) : relu(pre[l][j]);
        }
      }

      const double p = act[num_layers - 1][0];
      const int y = batch.labels[r];
      likelihood += bernoulli_log_likelihood(y, p);
      delta[num_layers - 1][0] = output_delta(y, p);

      // Backward through the affine layers and ReLU.
      for (std::size_t l = num_layers; l-- > 0;) {
        const std::size_t fan_out = model.layers[l].fan_out;
        const std::size_t fan_in = model.layers[l].fan_in;
        const double* input = (l == 0) ? x.data() : act[l - 1].data();
        for (std::size_t i = 0; i < fan_in; ++i) {
          const double a = input[i];
          double* gw_row = grad_w[l].data() + i * fan_out;
          for (std::size_t j = 0; j < fan_out; ++j) {
            gw_row[j] += a * delta[l][j];
          }
        }
        for (std::size_t j = 0; j < fan_out; ++j) {
          grad_b[l][j] += delta[l][j];
        }
        if (l > 0) {
          const double* w = net.layers[l].weights.data();
          for (std::size_t i = 0; i < fan_in; ++i) {
            double sum = 0.0;
            const double* w_row = w + i * fan_out;
            for (std::size_t j = 0; j < fan_out; ++j) {
              sum += w_row[j] * delta[l][j];
            }
            delta[l - 1][i] = pre[l - 1][i] > 0.0 ? sum : 0.0;
          }
        }
      }
    }

    // Chain the realized-weight gradients into (mean, rho) for this sample's
    // noise: w = mean + softplus(rho) * eps, d softplus/d rho = sigmoid(rho).
    std::size_t offset = 0;
    for (std::size_t l = 0; l < num_layers; ++l) {
      const auto& layer = model.layers[l];
      auto& grads = out.layers[l];
      for (std::size_t k = 0; k < layer.weight_count(); ++k) {
        const double g = grad_w[l][k] * inv_samples;
        grads.weight_mean[k] += g;
        grads.weight_rho[k] += g * eps[offset + k] * sigmoid(layer.weight_rho[k]);
      }
      offset += layer.weight_count();
      for (std::size_t j = 0; j < layer.fan_out; ++j) {
        const double g = grad_b[l][j] * inv_samples;
        grads.bias_mean[j] += g;
        grads.bias_rho[j] += g * eps[offset + j] * sigmoid(layer.bias_rho[j]);
      }
      offset += layer.fan_out;
    }
  }
  likelihood *= inv_samples;

  // Analytic KL part against the N(0, 1) prior:
  //   dKL/dmean = mean, dKL/dsigma = sigma - 1/sigma.
  for (std::size_t l = 0; l < num_layers; ++l) {
    const auto& layer = model.layers[l];
    auto& grads = out.layers[l];
    for (std::size_t k = 0; k < layer.weight_count(); ++k) {
      const double sd = softplus(layer.weight_rho[k]);
      grads.weight_mean[k] -= kl_scale * layer.weight_mean[k];
      grads.weight_rho[k] -= kl_scale * (sd - 1.0 / sd) * sigmoid(layer.weight_rho[k]);
    }
    for (std::size_t j = 0; j < layer.fan_out; ++j) {
      const double sd = softplus(layer.bias_rho[j]);
      grads.bias_mean[j] -= kl_scale * layer.bias_mean[j];
      grads.bias_rho[j] -= kl_scale * (sd - 1.0 / sd) * sigmoid(layer.bias_rho[j]);
    }
  }

  out.terms.likelihood = likelihood;
  out.terms.kl = analytic_kl(model);
  out.terms.elbo = likelihood - kl_scale * out.terms.kl;
  return out;
}

ElboGradient elbo_gradient(const BnnClassifier& model, const LabeledTable& batch,
                           RandomSource& rng, std::size_t num_samples,
                           double kl_scale) {
  return elbo_gradient_with_noise(model, batch, draw_noise(model, num_samples, rng),
                                  kl_scale);
}

}  // namespace rbnn
