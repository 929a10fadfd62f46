#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "garchvb/params.hpp"
#include "garchvb/rng.hpp"

namespace garchvb {

struct MleResult {
  Eigen::VectorXd theta;    // unconstrained maximizer
  double log_lik = 0.0;
  Eigen::MatrixXd hessian;  // finite-difference Hessian of the log-likelihood at theta
  bool converged = false;   // max-norm of the gradient below 1e-5
  int iterations = 0;
};

/// Maximum-likelihood point in theta-space: ADAM warmup from the conventional
/// start (or theta0), then damped Newton refinement using the analytic
/// gradient and a finite-difference Hessian. Reports converged=false with the
/// best point found when the gradient tolerance is not reached within the
/// iteration budget.
MleResult mle(std::span<const double> y, InnovationKind kind,
              const std::optional<Eigen::VectorXd>& theta0 = std::nullopt);

struct McmcConfig {
  int iterations = 50000;
  int burnin = -1;             // negative: iterations/10
  double proposal_scale = 0.0; // <= 0: 2.38/sqrt(d)
  std::uint64_t seed = 1;
};

struct PosteriorSamples {
  Eigen::MatrixXd draws;  // post burn-in, constrained space, one column per parameter
  std::vector<std::string> names;
  double acceptance_rate = 0.0;
  bool fallback_proposal = false;  // curvature unusable; fell back to 0.01 I
  MleResult mode;                  // the MLE the proposal was built around
};

/// Random-walk Metropolis over the unconstrained posterior
/// log p(theta) + log L(theta; y), started at the MLE with proposal
/// covariance scale^2 (-H)^{-1}; draws are returned in constrained space.
PosteriorSamples rwmh(std::span<const double> y, InnovationKind kind, const McmcConfig& cfg);

/// Generic Metropolis core used by rwmh and by tests against known targets;
/// returns the post burn-in chain (unconstrained), one row per iteration.
Eigen::MatrixXd rwmh_chain(const std::function<double(const Eigen::VectorXd&)>& log_target,
                           const Eigen::VectorXd& init, const Eigen::MatrixXd& proposal_chol,
                           int iterations, int burnin, Rng& rng,
                           double* acceptance_rate = nullptr);

struct ChainDiagnostics {
  Eigen::VectorXd ess;        // effective sample size per column
  Eigen::VectorXd split_rhat; // NaN for degenerate (constant) columns
};
ChainDiagnostics chain_diagnostics(const Eigen::MatrixXd& draws);

}  // namespace garchvb
