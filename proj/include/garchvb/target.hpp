#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "garchvb/garch_model.hpp"
#include "garchvb/params.hpp"
#include "garchvb/variational.hpp"

namespace garchvb {

/// An unnormalized log density on R^d with gradient. Both the variational
/// optimizer and the Metropolis sampler work against this interface, so test
/// targets (conjugate toys, plain priors) plug in the same way as the model.
class LogTarget {
 public:
  virtual ~LogTarget() = default;
  virtual int dim() const = 0;
  virtual double log_density(const Eigen::VectorXd& theta) const = 0;
  /// Returns the log density and writes its gradient into grad.
  virtual double log_density_grad(const Eigen::VectorXd& theta, Eigen::VectorXd& grad) const = 0;
};

/// log p(theta) + log L(theta; y): the GARCH posterior kernel.
class GarchPosterior final : public LogTarget {
 public:
  GarchPosterior(std::vector<double> y, InnovationKind kind);

  int dim() const override { return param_count(kind_); }
  double log_density(const Eigen::VectorXd& theta) const override;
  double log_density_grad(const Eigen::VectorXd& theta, Eigen::VectorXd& grad) const override;

  const std::vector<double>& series() const { return y_; }
  InnovationKind kind() const { return kind_; }

 private:
  std::vector<double> y_;
  InnovationKind kind_;
};

/// Pseudo-posterior for one streaming update: the likelihood of the new
/// window (variance recursion still run over the whole observed history)
/// times the previous variational approximation standing in for the prior.
class UvbPseudoPosterior final : public LogTarget {
 public:
  /// y covers everything observed so far; the new observations are
  /// y[window_start..window_end).
  UvbPseudoPosterior(std::vector<double> y, InnovationKind kind, VariationalState prev,
                     int window_start, int window_end);

  int dim() const override { return param_count(kind_); }
  double log_density(const Eigen::VectorXd& theta) const override;
  double log_density_grad(const Eigen::VectorXd& theta, Eigen::VectorXd& grad) const override;

 private:
  std::vector<double> y_;  // truncated at window_end
  InnovationKind kind_;
  VariationalState prev_;
  int window_start_;
};

}  // namespace garchvb
