#pragma once

#include <cmath>

namespace garchvb {

/// Logistic function 1/(1+exp(-x)), stable for large |x|.
inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// log(1+exp(x)) without overflow.
inline double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

/// Inverse of softplus: log(exp(y)-1), y > 0.
inline double inv_softplus(double y) {
  return y > 30.0 ? y + std::log1p(-std::exp(-y)) : std::log(std::expm1(y));
}

/// log(p/(1-p)), p in (0,1).
inline double logit(double p) { return std::log(p) - std::log1p(-p); }

/// Digamma function psi(x) = d/dx log Gamma(x), x > 0.
/// Recurrence shift to x >= 10 followed by the asymptotic series;
/// absolute error below 1e-13 over the arguments used here (x >= 0.5).
double digamma(double x);

}  // namespace garchvb
