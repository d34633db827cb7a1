#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rbnn {

// Gaussian with diagonal covariance, the variational family and the prior for
// every network parameter. Construction validates that the stddev entries are
// strictly positive and that both vectors have the same length.
class DiagonalGaussian {
 public:
  DiagonalGaussian(std::vector<double> mean, std::vector<double> stddev);

  static DiagonalGaussian standard(std::size_t dim);  // N(0, I)

  std::size_t dim() const { return mean_.size(); }
  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& stddev() const { return stddev_; }

 private:
  std::vector<double> mean_;
  std::vector<double> stddev_;
};

// Closed-form KL(q || p) between diagonal Gaussians of equal dimension:
//   sum_i [ ln(p.sd_i / q.sd_i) + (q.sd_i^2 + (q.mu_i - p.mu_i)^2) / (2 p.sd_i^2) - 1/2 ]
// Nonnegative; zero iff q and p coincide elementwise.
double kl_diag_gaussian(const DiagonalGaussian& q, const DiagonalGaussian& p);

// Reparameterized sample g.mean + g.stddev * eps (elementwise); eps is a
// standard-normal draw supplied by the caller, same dimension as g.
std::vector<double> sample_reparameterized(const DiagonalGaussian& g,
                                           std::span<const double> eps);

}  // namespace rbnn
