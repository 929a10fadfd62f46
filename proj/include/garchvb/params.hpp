#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace garchvb {

enum class InnovationKind { Gaussian, StudentT, SkewT };

/// Number of model parameters: 3 (Gaussian), 4 (Student t), 5 (skew t).
int param_count(InnovationKind kind);

/// Constrained-space names, in order: omega, alpha, beta[, nu][, xi].
const std::vector<std::string>& param_names(InnovationKind kind);

std::string to_string(InnovationKind kind);
InnovationKind innovation_kind_from_string(const std::string& name);

/// GARCH(1,1) parameters in their natural (constrained) space:
///   sigma2_t = omega + alpha * y_{t-1}^2 + beta * sigma2_{t-1}
/// with omega > 0, alpha > 0, beta > 0, alpha + beta < 1 (covariance
/// stationarity). nu > 2 is the innovation degrees-of-freedom and xi > 0 the
/// skewness; each is required exactly when the innovation kind uses it.
struct GarchParams {
  double omega = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<double> nu;
  std::optional<double> xi;

  /// Throws ConstraintViolation when any invariant fails for this kind.
  void validate(InnovationKind kind) const;

  double unconditional_variance() const { return omega / (1.0 - alpha - beta); }
};

/// Bijection onto R^d. theta layout, always in this order:
///   theta[0] = log(omega)
///   theta[1] = logit(alpha + beta)          (persistence psi1)
///   theta[2] = logit(alpha / (alpha+beta))  (mixing fraction psi2)
///   theta[3] = inv_softplus(nu - 2)         (StudentT, SkewT)
///   theta[4] = inv_softplus(xi)             (SkewT)
Eigen::VectorXd to_unconstrained(const GarchParams& p, InnovationKind kind);

/// Inverse map; any finite theta lands strictly inside the valid region.
GarchParams to_constrained(const Eigen::VectorXd& theta, InnovationKind kind);

/// Log prior density of theta, including transform Jacobians. The prior is
/// specified directly in theta-space:
///   theta_omega:        -theta - exp(-theta)        (omega ~ InvGamma(1,1))
///   theta_psi1/2:       standard logistic           (psi uniform on (0,1))
///   theta_nu:           standard logistic
///   theta_xi:           -2*log(softplus(theta)) - 1/softplus(theta)
///                       - log(1+exp(-theta))        (xi ~ InvGamma(1,1))
double log_prior(const Eigen::VectorXd& theta, InnovationKind kind);

Eigen::VectorXd grad_log_prior(const Eigen::VectorXd& theta, InnovationKind kind);

}  // namespace garchvb
