#include "rbnn/train.hpp"

#include <cmath>
#include <string>

#include "rbnn/elbo.hpp"
#include "rbnn/errors.hpp"

namespace rbnn {

namespace {

constexpr std::uint64_t kTrainStream = 2;
constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

// First and second moment buffers, one pair per parameter array.
struct AdamSlot {
  std::vector<double> m;
  std::vector<double> v;

  explicit AdamSlot(std::size_t n) : m(n, 0.0), v(n, 0.0) {}

  // One Adam step on params, minimizing: grad is of the MAXIMIZED objective.
  void update(std::vector<double>& params, const std::vector<double>& elbo_grad,
              double lr, double bias1, double bias2) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double g = -elbo_grad[i];
      m[i] = kAdamBeta1 * m[i] + (1.0 - kAdamBeta1) * g;
      v[i] = kAdamBeta2 * v[i] + (1.0 - kAdamBeta2) * g * g;
      const double m_hat = m[i] / bias1;
      const double v_hat = v[i] / bias2;
      params[i] -= lr * m_hat / (std::sqrt(v_hat) + kAdamEps);
    }
  }
};

void check_finite(const ElboTerms& terms, std::size_t epoch) {
  if (std::isfinite(terms.elbo)) {
    return;
  }
  const char* term = !std::isfinite(terms.likelihood) ? "likelihood term"
                     : !std::isfinite(terms.kl)       ? "kl term"
                                                      : "elbo";
  throw Error("train: non-finite " + std::string(term) + " at epoch " +
              std::to_string(epoch));
}

}  // namespace

void TrainConfig::validate() const {
  if (!(initial_learning_rate > 0.0)) {
    throw Error("TrainConfig: initial_learning_rate must be positive");
  }
  if (!(decay_rate > 0.0) || decay_rate > 1.0) {
    throw Error("TrainConfig: decay_rate must be in (0, 1]");
  }
  if (elbo_mc_samples < 1) {
    throw Error("TrainConfig: elbo_mc_samples must be at least 1");
  }
  if (kl_scale && *kl_scale < 0.0) {
    throw Error("TrainConfig: kl_scale must be nonnegative");
  }
}

TrainResult train(const BnnClassifier& model, const LabeledTable& train_set,
                  const TrainConfig& config) {
  config.validate();
  if (train_set.rows() == 0) {
    throw DataError("train: empty training set");
  }

  TrainResult result{model, {}};
  if (config.epochs == 0) {
    return result;
  }
  BnnClassifier& net = result.model;

  const std::size_t n = train_set.rows();
  const std::size_t batch_size =
      (config.batch_size == 0 || config.batch_size >= n) ? n : config.batch_size;
  const std::size_t num_batches = (n + batch_size - 1) / batch_size;
  const double kl_scale =
      config.kl_scale.value_or(1.0 / static_cast<double>(num_batches));

  std::vector<AdamSlot> adam_wm;
  std::vector<AdamSlot> adam_wr;
  std::vector<AdamSlot> adam_bm;
  std::vector<AdamSlot> adam_br;
  for (const auto& layer : net.layers) {
    adam_wm.emplace_back(layer.weight_count());
    adam_wr.emplace_back(layer.weight_count());
    adam_bm.emplace_back(layer.fan_out);
    adam_br.emplace_back(layer.fan_out);
  }

  RandomSource root(config.seed, kTrainStream);
  result.history.reserve(config.epochs);
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = config.initial_learning_rate *
                      std::pow(config.decay_rate, static_cast<double>(epoch));
    RandomSource epoch_rng = root.child(epoch);

    std::vector<std::size_t> order;
    if (num_batches > 1) {
      RandomSource shuffle_rng = epoch_rng.child(0);
      order = shuffle_rng.permutation(n);
    }

    EpochRecord record{epoch, 0.0, 0.0, 0.0, lr};
    for (std::size_t b = 0; b < num_batches; ++b) {
      RandomSource batch_rng = epoch_rng.child(b + 1);
      ElboGradient grad;
      if (num_batches == 1) {
        grad = elbo_gradient(net, train_set, batch_rng, config.elbo_mc_samples,
                             kl_scale);
      } else {
        const std::size_t begin = b * batch_size;
        const std::size_t end = std::min(begin + batch_size, n);
        const LabeledTable batch = train_set.take_rows(
            {order.data() + begin, end - begin});
        grad = elbo_gradient(net, batch, batch_rng, config.elbo_mc_samples,
                             kl_scale);
      }
      check_finite(grad.terms, epoch);

      ++step;
      const double bias1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(step));
      const double bias2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(step));
      for (std::size_t l = 0; l < net.layers.size(); ++l) {
        auto& layer = net.layers[l];
        const auto& g = grad.layers[l];
        adam_wm[l].update(layer.weight_mean, g.weight_mean, lr, bias1, bias2);
        adam_wr[l].update(layer.weight_rho, g.weight_rho, lr, bias1, bias2);
        adam_bm[l].update(layer.bias_mean, g.bias_mean, lr, bias1, bias2);
        adam_br[l].update(layer.bias_rho, g.bias_rho, lr, bias1, bias2);
      }

      record.elbo += grad.terms.elbo;
      record.likelihood += grad.terms.likelihood;
      record.kl += grad.terms.kl;
    }
    record.elbo /= static_cast<double>(num_batches);
    record.likelihood /= static_cast<double>(num_batches);
    record.kl /= static_cast<double>(num_batches);
    result.history.push_back(record);
  }
  return result;
}

}  // namespace rbnn
