#pragma once

#include <cmath>

namespace rbnn {

// Scalar numerics shared by every module. All functions are pure; inputs are
// expected to be finite.

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

// Logistic function, overflow-safe for any finite x.
inline double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + e^x) without overflow; monotone, asymptotically x for large x.
inline double softplus(double x) {
  return (x > 0.0 ? x : 0.0) + std::log1p(std::exp(-std::abs(x)));
}

// Inverse of softplus: returns rho such that softplus(rho) = y, y > 0.
// Uses log(e^y - 1) = y + log(1 - e^-y) for stability at large y.
inline double inverse_softplus(double y) {
  if (y > 30.0) {
    return y;  // e^-y below double resolution
  }
  return y + std::log(-std::expm1(-y));
}

// Probabilities are clamped into [kLikelihoodEps, 1 - kLikelihoodEps] before
// taking logs so the likelihood stays finite at p = 0 or 1.
inline constexpr double kLikelihoodEps = 1e-7;

// log Bernoulli(y | p) with the clamp above; y must be 0 or 1.
inline double bernoulli_log_likelihood(int y, double p) {
  double clamped = p;
  if (clamped < kLikelihoodEps) {
    clamped = kLikelihoodEps;
  } else if (clamped > 1.0 - kLikelihoodEps) {
    clamped = 1.0 - kLikelihoodEps;
  }
  return y != 0 ? std::log(clamped) : std::log1p(-clamped);
}

}  // namespace rbnn
