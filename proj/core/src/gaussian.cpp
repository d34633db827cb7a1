#include "rbnn/gaussian.hpp"

#include <cmath>
#include <utility>

#include "rbnn/errors.hpp"

namespace rbnn {

DiagonalGaussian::DiagonalGaussian(std::vector<double> mean, std::vector<double> stddev)
    : mean_(std::move(mean)), stddev_(std::move(stddev)) {
  if (mean_.size() != stddev_.size()) {
    throw DimensionError("DiagonalGaussian: mean and stddev lengths differ");
  }
  for (double sd : stddev_) {
    if (!(sd > 0.0)) {
      throw Error("DiagonalGaussian: stddev entries must be strictly positive");
    }
  }
}

DiagonalGaussian DiagonalGaussian::standard(std::size_t dim) {
  return DiagonalGaussian(std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0));
}

double kl_diag_gaussian(const DiagonalGaussian& q, const DiagonalGaussian& p) {
  if (q.dim() != p.dim()) {
    throw DimensionError("kl_diag_gaussian: dimension mismatch");
  }
  double kl = 0.0;
  for (std::size_t i = 0; i < q.dim(); ++i) {
    const double qs = q.stddev()[i];
    const double ps = p.stddev()[i];
    const double dm = q.mean()[i] - p.mean()[i];
    kl += std::log(ps / qs) + (qs * qs + dm * dm) / (2.0 * ps * ps) - 0.5;
  }
  return kl;
}

std::vector<double> sample_reparameterized(const DiagonalGaussian& g,
                                           std::span<const double> eps) {
  if (eps.size() != g.dim()) {
    throw DimensionError("sample_reparameterized: eps dimension mismatch");
  }
  std::vector<double> sample(g.dim());
  for (std::size_t i = 0; i < g.dim(); ++i) {
    sample[i] = g.mean()[i] + g.stddev()[i] * eps[i];
  }
  return sample;
}

}  // namespace rbnn
