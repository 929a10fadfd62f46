#include "garchvb/target.hpp"

#include "garchvb/errors.hpp"

namespace garchvb {

GarchPosterior::GarchPosterior(std::vector<double> y, InnovationKind kind)
    : y_(std::move(y)), kind_(kind) {
  if (y_.empty()) throw DegenerateSeries("series is empty");
}

double GarchPosterior::log_density(const Eigen::VectorXd& theta) const {
  return log_prior(theta, kind_) + log_likelihood(theta, y_, kind_);
}

double GarchPosterior::log_density_grad(const Eigen::VectorXd& theta,
                                        Eigen::VectorXd& grad) const {
  const double ll = log_likelihood_grad(theta, y_, kind_, grad);
  grad += grad_log_prior(theta, kind_);
  return ll + log_prior(theta, kind_);
}

UvbPseudoPosterior::UvbPseudoPosterior(std::vector<double> y, InnovationKind kind,
                                       VariationalState prev, int window_start, int window_end)
    : y_(std::move(y)), kind_(kind), prev_(std::move(prev)), window_start_(window_start) {
  if (window_start < 0 || window_end <= window_start ||
      window_end > static_cast<int>(y_.size()))
    throw DimensionMismatch("update window outside the observed series");
  y_.resize(window_end);
  prev_.validate();
  if (prev_.dim() != param_count(kind))
    throw DimensionMismatch("previous state dimension does not match innovation kind");
}

double UvbPseudoPosterior::log_density(const Eigen::VectorXd& theta) const {
  return log_q(theta, prev_) + log_likelihood(theta, y_, kind_, window_start_);
}

double UvbPseudoPosterior::log_density_grad(const Eigen::VectorXd& theta,
                                            Eigen::VectorXd& grad) const {
  const double ll = log_likelihood_grad(theta, y_, kind_, grad, window_start_);
  grad += grad_log_q_theta(theta, prev_);
  return ll + log_q(theta, prev_);
}

}  // namespace garchvb
