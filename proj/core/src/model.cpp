#include "rbnn/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rbnn/errors.hpp"
#include "rbnn/math.hpp"

namespace rbnn {

namespace {

constexpr std::uint64_t kInitStream = 1;
constexpr double kInitMeanStddev = 0.1;

}  // namespace

std::size_t BnnClassifier::param_count() const {
  std::size_t count = 0;
  for (const auto& layer : layers) {
    count += layer.param_count();
  }
  return count;
}

std::vector<std::size_t> BnnClassifier::layer_sizes() const {
  std::vector<std::size_t> sizes;
  sizes.push_back(layers.front().fan_in);
  for (const auto& layer : layers) {
    sizes.push_back(layer.fan_out);
  }
  return sizes;
}

BnnClassifier init_model(std::span<const std::size_t> layer_sizes, std::uint64_t seed) {
  if (layer_sizes.size() < 2) {
    throw Error("init_model: need at least input and output sizes");
  }
  for (std::size_t size : layer_sizes) {
    if (size < 1) {
      throw Error("init_model: layer sizes must be at least 1");
    }
  }
  if (layer_sizes.back() != 1) {
    throw Error("init_model: binary classifier requires a single output node");
  }

  const double rho0 = inverse_softplus(kInitSigma);
  RandomSource rng(seed, kInitStream);
  BnnClassifier model;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    LayerVariational layer;
    layer.fan_in = layer_sizes[l];
    layer.fan_out = layer_sizes[l + 1];
    layer.weight_mean.resize(layer.weight_count());
    layer.bias_mean.resize(layer.fan_out);
    for (double& w : layer.weight_mean) {
      w = kInitMeanStddev * rng.normal();
    }
    for (double& b : layer.bias_mean) {
      b = kInitMeanStddev * rng.normal();
    }
    layer.weight_rho.assign(layer.weight_count(), rho0);
    layer.bias_rho.assign(layer.fan_out, rho0);
    model.layers.push_back(std::move(layer));
  }
  return model;
}

DiagonalGaussian posterior_over_parameters(const BnnClassifier& model) {
  std::vector<double> mean;
  std::vector<double> stddev;
  mean.reserve(model.param_count());
  stddev.reserve(model.param_count());
  for (const auto& layer : model.layers) {
    mean.insert(mean.end(), layer.weight_mean.begin(), layer.weight_mean.end());
    for (double rho : layer.weight_rho) {
      stddev.push_back(softplus(rho));
    }
    mean.insert(mean.end(), layer.bias_mean.begin(), layer.bias_mean.end());
    for (double rho : layer.bias_rho) {
      stddev.push_back(softplus(rho));
    }
  }
  return DiagonalGaussian(std::move(mean), std::move(stddev));
}

NetworkRealization realize(const BnnClassifier& model, std::span<const double> eps) {
  if (eps.size() != model.param_count()) {
    throw DimensionError("realize: eps must have one entry per parameter");
  }
  NetworkRealization net;
  net.layers.resize(model.layers.size());
  std::size_t offset = 0;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const auto& layer = model.layers[l];
    auto& out = net.layers[l];
    out.weights.resize(layer.weight_count());
    out.biases.resize(layer.fan_out);
    for (std::size_t i = 0; i < layer.weight_count(); ++i) {
      out.weights[i] = layer.weight_mean[i] + softplus(layer.weight_rho[i]) * eps[offset + i];
    }
    offset += layer.weight_count();
    for (std::size_t j = 0; j < layer.fan_out; ++j) {
      out.biases[j] = layer.bias_mean[j] + softplus(layer.bias_rho[j]) * eps[offset + j];
    }
    offset += layer.fan_out;
  }
  return net;
}

double forward_realized(const NetworkRealization& net, std::span<const double> x) {
  const std::size_t first_fan_out = net.layers.front().biases.size();
  if (x.size() != net.layers.front().weights.size() / first_fan_out) {
    throw DimensionError("forward: input dimension mismatch");
  }
  std::vector<double> activation(x.begin(), x.end());
  std::vector<double> next;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& layer = net.layers[l];
    const std::size_t fan_out = layer.biases.size();
    const std::size_t fan_in = layer.weights.size() / fan_out;
    next.assign(layer.biases.begin(), layer.biases.end());
    for (std::size_t i = 0; i < fan_in; ++i) {
      const double a = activation[i];
      const double* w_row = layer.weights.data() + i * fan_out;
      for (std::size_t j = 0; j < fan_out; ++j) {
        next[j] += a * w_row[j];
      }
    }
    const bool last = (l + 1 == net.layers.size());
    for (double& z : next) {
      z = last ? sigmoid(z) : relu(z);
    }
    activation.swap(next);
  }
  return activation.front();
}

double forward_sampled(const BnnClassifier& model, std::span<const double> x,
                       std::span<const double> eps) {
  if (x.size() != model.input_dim()) {
    throw DimensionError("forward_sampled: input dimension mismatch");
  }
  return forward_realized(realize(model, eps), x);
}

std::vector<NetworkRealization> sample_posterior(const BnnClassifier& model,
                                                 std::size_t num_samples,
                                                 RandomSource& rng) {
  std::vector<NetworkRealization> samples;
  samples.reserve(num_samples);
  std::vector<double> eps(model.param_count());
  for (std::size_t s = 0; s < num_samples; ++s) {
    RandomSource sample_rng = rng.child(s);
    sample_rng.fill_normal(eps);
    samples.push_back(realize(model, eps));
  }
  return samples;
}

std::vector<LayerSummary> weight_summary(const BnnClassifier& model) {
  std::vector<LayerSummary> summary;
  summary.reserve(model.layers.size());
  for (const auto& layer : model.layers) {
    LayerSummary s;
    s.fan_in = layer.fan_in;
    s.fan_out = layer.fan_out;
    s.weight_mean = layer.weight_mean;
    s.bias_mean = layer.bias_mean;
    s.weight_stddev.reserve(layer.weight_count());
    for (double rho : layer.weight_rho) {
      s.weight_stddev.push_back(softplus(rho));
    }
    s.bias_stddev.reserve(layer.fan_out);
    for (double rho : layer.bias_rho) {
      s.bias_stddev.push_back(softplus(rho));
    }
    summary.push_back(std::move(s));
  }
  return summary;
}

std::vector<GroupDensity> prior_posterior_density(const BnnClassifier& model,
                                                  std::size_t bins) {
  if (bins < 2) {
    throw Error("prior_posterior_density: need at least 2 bins");
  }
  auto histogram = [&](const std::string& group, const std::vector<double>& means) {
    GroupDensity density;
    density.group = group;
    // Cover both the prior's bulk and every observed mean.
    double lo = -3.0;
    double hi = 3.0;
    for (double m : means) {
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
    const double width = (hi - lo) / static_cast<double>(bins);
    density.bins.resize(bins);
    for (std::size_t b = 0; b < bins; ++b) {
      const double center = lo + (static_cast<double>(b) + 0.5) * width;
      density.bins[b].center = center;
      density.bins[b].prior_density =
          std::exp(-0.5 * center * center) / std::sqrt(2.0 * std::numbers::pi);
    }
    for (double m : means) {
      auto b = static_cast<std::size_t>((m - lo) / width);
      if (b >= bins) {
        b = bins - 1;  // right edge is inclusive
      }
      ++density.bins[b].count;
    }
    return density;
  };

  std::vector<GroupDensity> groups;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    groups.push_back(histogram("w" + std::to_string(l), model.layers[l].weight_mean));
    groups.push_back(histogram("b" + std::to_string(l), model.layers[l].bias_mean));
  }
  return groups;
}

}  // namespace rbnn
