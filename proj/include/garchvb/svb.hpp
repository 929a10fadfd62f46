#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "garchvb/rng.hpp"
#include "garchvb/target.hpp"
#include "garchvb/variational.hpp"

namespace garchvb {

/// Gradient estimator for the ELBO.
///   ControlVariates:    score-function estimator, Precision factorization,
///                       per-coordinate control variates from the previous
///                       iteration's draws.
///   Reparameterization: pathwise estimator, Covariance factorization.
///   MeanField:          ControlVariates restricted to a diagonal factor.
enum class Method { ControlVariates, Reparameterization, MeanField };

enum class StopReason { Patience, MaxIterations };

struct OptimizerConfig {
  double beta1 = 0.9;
  double beta2 = 0.9;
  double eta0 = 0.02;   // learning-rate ceiling
  double tau = 1000.0;  // iterations before the 1/t decay engages
  int mc_samples = 10;  // S, draws per gradient estimate
  int window = 25;      // smoothing window for the stopping rule
  int patience = 100;   // tolerated iterations without a new best window mean
  int max_iters = 10000;
  std::uint64_t seed = 1;

  void validate(Method method) const;
};

struct FitResult {
  VariationalState state;
  std::vector<double> elbo_trace;  // one sample-average of h per iteration
  int iterations = 0;
  StopReason stopped_by = StopReason::MaxIterations;
  double wall_seconds = 0.0;
  double final_window_elbo = 0.0;  // mean of the last `window` trace entries
};

/// h(theta) = log target(theta) - log q(theta): the integrand whose
/// expectation under q is the ELBO.
double h_lambda(const Eigen::VectorXd& theta, const VariationalState& s, const LogTarget& target);

/// One ADAM ascent step with step size min(eta0, eta0*tau/t); t is 1-based and
/// the first call initializes the moment accumulators to g and g^2.
void adam_step(Eigen::VectorXd& lambda, const Eigen::VectorXd& grad, Eigen::VectorXd& gbar,
               Eigen::VectorXd& vbar, int t, const OptimizerConfig& cfg);

/// Per-coordinate control-variate coefficients
///   c_j = Cov(score_j, h * score_j) / Var(score_j)
/// from S draws (rows of score); coordinates with vanishing score variance
/// get c_j = 0.
Eigen::VectorXd control_variates(const Eigen::VectorXd& h, const Eigen::MatrixXd& score);

struct CvEstimate {
  Eigen::VectorXd grad;   // (1/S) sum_s (h_s - c_j) score_{s,j}
  Eigen::VectorXd h;      // per-draw h values (ELBO estimate = h.mean())
  Eigen::MatrixXd score;  // S x lambda_size, for next iteration's coefficients
};
CvEstimate cv_gradient(const LogTarget& target, const VariationalState& s, int S,
                       const Eigen::VectorXd& c, Rng& rng);

struct RtEstimate {
  Eigen::VectorXd grad;
  Eigen::VectorXd h;
};
RtEstimate rt_gradient(const LogTarget& target, const VariationalState& s, int S, Rng& rng);

/// Maximizes the ELBO for an arbitrary target. init is converted to the
/// factorization the method needs; MeanField additionally zeroes (and keeps
/// zero) all off-diagonal factor entries.
FitResult fit_svb(const LogTarget& target, Method method, const OptimizerConfig& cfg,
                  const VariationalState& init);

/// GARCH convenience overload. Without an explicit init, starts from the
/// conventional point (see default_start_theta) with per-coordinate
/// standard deviation 0.1.
FitResult fit_svb(std::span<const double> y, InnovationKind kind, Method method,
                  const OptimizerConfig& cfg,
                  const std::optional<VariationalState>& init = std::nullopt);

/// n draws from q mapped to the constrained space; one column per parameter
/// in param_names order.
Eigen::MatrixXd constrained_draws(const VariationalState& s, InnovationKind kind, int n,
                                  Rng& rng);

std::string to_string(Method method);
Method method_from_string(const std::string& name);

}  // namespace garchvb
