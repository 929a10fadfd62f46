#include "garchvb/params.hpp"

#include <cmath>

#include "garchvb/errors.hpp"
#include "garchvb/math_utils.hpp"

namespace garchvb {

int param_count(InnovationKind kind) {
  switch (kind) {
    case InnovationKind::Gaussian: return 3;
    case InnovationKind::StudentT: return 4;
    case InnovationKind::SkewT: return 5;
  }
  throw UsageError("unknown innovation kind");
}

const std::vector<std::string>& param_names(InnovationKind kind) {
  static const std::vector<std::string> gaussian{"omega", "alpha", "beta"};
  static const std::vector<std::string> student{"omega", "alpha", "beta", "nu"};
  static const std::vector<std::string> skew{"omega", "alpha", "beta", "nu", "xi"};
  switch (kind) {
    case InnovationKind::Gaussian: return gaussian;
    case InnovationKind::StudentT: return student;
    case InnovationKind::SkewT: return skew;
  }
  throw UsageError("unknown innovation kind");
}

std::string to_string(InnovationKind kind) {
  switch (kind) {
    case InnovationKind::Gaussian: return "gaussian";
    case InnovationKind::StudentT: return "t";
    case InnovationKind::SkewT: return "skewt";
  }
  throw UsageError("unknown innovation kind");
}

InnovationKind innovation_kind_from_string(const std::string& name) {
  if (name == "gaussian" || name == "normal") return InnovationKind::Gaussian;
  if (name == "t" || name == "student" || name == "studentt") return InnovationKind::StudentT;
  if (name == "skewt" || name == "skew-t") return InnovationKind::SkewT;
  throw UsageError("unknown innovation kind '" + name + "' (expected gaussian, t, or skewt)");
}

void GarchParams::validate(InnovationKind kind) const {
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw ConstraintViolation("omega must be positive and finite");
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw ConstraintViolation("alpha and beta must be positive");
  if (!(alpha + beta < 1.0))
    throw ConstraintViolation("alpha + beta must be below 1");
  const bool wants_nu = kind != InnovationKind::Gaussian;
  const bool wants_xi = kind == InnovationKind::SkewT;
  if (wants_nu) {
    if (!nu) throw ConstraintViolation("nu required for this innovation kind");
    if (!(*nu > 2.0) || !std::isfinite(*nu))
      throw ConstraintViolation("nu must exceed 2");
  } else if (nu) {
    throw ConstraintViolation("nu given but not used by this innovation kind");
  }
  if (wants_xi) {
    if (!xi) throw ConstraintViolation("xi required for this innovation kind");
    if (!(*xi > 0.0) || !std::isfinite(*xi))
      throw ConstraintViolation("xi must be positive");
  } else if (xi) {
    throw ConstraintViolation("xi given but not used by this innovation kind");
  }
}

Eigen::VectorXd to_unconstrained(const GarchParams& p, InnovationKind kind) {
  p.validate(kind);
  const int d = param_count(kind);
  Eigen::VectorXd theta(d);
  const double psi1 = p.alpha + p.beta;
  const double psi2 = p.alpha / psi1;
  theta[0] = std::log(p.omega);
  theta[1] = logit(psi1);
  theta[2] = logit(psi2);
  if (d > 3) theta[3] = inv_softplus(*p.nu - 2.0);
  if (d > 4) theta[4] = inv_softplus(*p.xi);
  return theta;
}

GarchParams to_constrained(const Eigen::VectorXd& theta, InnovationKind kind) {
  const int d = param_count(kind);
  if (theta.size() != d) throw DimensionMismatch("theta has wrong length for innovation kind");
  if (!theta.allFinite()) throw NonFiniteError("theta must be finite");
  GarchParams p;
  const double psi1 = sigmoid(theta[1]);
  const double psi2 = sigmoid(theta[2]);
  p.omega = std::exp(theta[0]);
  p.alpha = psi1 * psi2;
  p.beta = psi1 * (1.0 - psi2);
  if (d > 3) p.nu = softplus(theta[3]) + 2.0;
  if (d > 4) p.xi = softplus(theta[4]);
  return p;
}

double log_prior(const Eigen::VectorXd& theta, InnovationKind kind) {
  const int d = param_count(kind);
  if (theta.size() != d) throw DimensionMismatch("theta has wrong length for innovation kind");
  auto logistic = [](double t) { return -t - 2.0 * std::log1p(std::exp(-t)); };
  // Stable form of the logistic log-density for very negative t.
  auto log_logistic = [&](double t) {
    return t >= 0.0 ? logistic(t) : t - 2.0 * std::log1p(std::exp(t));
  };
  double lp = -theta[0] - std::exp(-theta[0]);
  lp += log_logistic(theta[1]);
  lp += log_logistic(theta[2]);
  if (d > 3) lp += log_logistic(theta[3]);
  if (d > 4) {
    // Work with log(xi) so that softplus underflow (theta << 0, xi -> e^theta)
    // degrades to -inf instead of NaN.
    const double log_xi = theta[4] > -30.0 ? std::log(softplus(theta[4])) : theta[4];
    lp += -2.0 * log_xi - std::exp(-log_xi);
    lp += theta[4] >= 0.0 ? -std::log1p(std::exp(-theta[4]))
                          : theta[4] - std::log1p(std::exp(theta[4]));
  }
  return lp;
}

Eigen::VectorXd grad_log_prior(const Eigen::VectorXd& theta, InnovationKind kind) {
  const int d = param_count(kind);
  if (theta.size() != d) throw DimensionMismatch("theta has wrong length for innovation kind");
  Eigen::VectorXd g(d);
  g[0] = -1.0 + std::exp(-theta[0]);
  g[1] = 1.0 - 2.0 * sigmoid(theta[1]);
  g[2] = 1.0 - 2.0 * sigmoid(theta[2]);
  if (d > 3) g[3] = 1.0 - 2.0 * sigmoid(theta[3]);
  if (d > 4) {
    if (theta[4] > -30.0) {
      const double xi = softplus(theta[4]);
      const double sg = sigmoid(theta[4]);
      g[4] = -2.0 * sg / xi + sg / (xi * xi) + sigmoid(-theta[4]);
    } else {
      // xi ~ e^theta: sigmoid/xi -> 1, sigmoid/xi^2 -> e^-theta, sigmoid(-t) -> 1
      g[4] = -1.0 + std::exp(-theta[4]);
    }
  }
  return g;
}

}  // namespace garchvb
