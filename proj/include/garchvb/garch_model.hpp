#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "garchvb/params.hpp"

namespace garchvb {

/// Conditional variance path sigma2[t] for t = 0..T-1, started at the
/// unconditional variance sigma2[0] = omega / (1 - alpha - beta), then
/// sigma2[t] = omega + alpha y[t-1]^2 + beta sigma2[t-1].
std::vector<double> variance_recursion(const Eigen::VectorXd& theta, std::span<const double> y);

/// Derivatives of the variance path with respect to the three unconstrained
/// variance parameters; row t holds (d sigma2[t] / d theta_k) for k = 0,1,2.
Eigen::MatrixXd variance_sensitivities(const Eigen::VectorXd& theta, std::span<const double> y);

/// Location/scale constants that standardize the skewed t density to zero
/// mean and unit variance.
struct SkewTConstants {
  double m;
  double s;
};
SkewTConstants skewt_constants(double nu, double xi);

/// Log density of the zero-mean, unit-variance Student t (nu > 2).
double studentt_log_pdf(double x, double nu);

/// Log density of the standardized skewed t (nu > 2, xi > 0); xi < 1 skews
/// left, xi = 1 recovers the symmetric t.
double skewt_log_pdf(double x, double nu, double xi);

/// GARCH(1,1) log-likelihood of y. The variance recursion always runs from
/// t = 0; per-observation terms are summed over t >= sum_from, which is what
/// a sequential update needs when only the tail of the series is new.
double log_likelihood(const Eigen::VectorXd& theta, std::span<const double> y,
                      InnovationKind kind, int sum_from = 0);

/// Gradient of log_likelihood with respect to theta (analytic).
Eigen::VectorXd grad_log_likelihood(const Eigen::VectorXd& theta, std::span<const double> y,
                                    InnovationKind kind, int sum_from = 0);

/// Value and gradient in one forward pass; the hot path of both estimators.
double log_likelihood_grad(const Eigen::VectorXd& theta, std::span<const double> y,
                           InnovationKind kind, Eigen::VectorXd& grad, int sum_from = 0);

/// Conventional starting point used by both the variational fit and the
/// likelihood maximizer: omega = 0.05 Var(y), alpha = 0.1, beta = 0.8,
/// nu = 8, xi = 1, mapped to theta-space.
Eigen::VectorXd default_start_theta(std::span<const double> y, InnovationKind kind);

}  // namespace garchvb
