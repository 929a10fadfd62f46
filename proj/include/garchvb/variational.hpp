#pragma once

#include <Eigen/Dense>

namespace garchvb {

/// How the Gaussian q is parameterized through a lower-triangular factor.
///   Precision:  Sigma^{-1} = C C^T (used by the score-based estimator)
///   Covariance: Sigma = L L^T      (used by the reparameterization estimator)
enum class Factorization { Precision, Covariance };

/// Whether the stored diagonal entries are logs of the effective ones
/// (guaranteeing positivity during optimization) or plain values.
enum class DiagParam { LogScale, Free };

/// q(theta) = N(mu, Sigma). `chol` holds raw entries; with DiagParam::LogScale
/// the effective factor applies exp() to the diagonal. The flat optimization
/// vector is lambda = (mu, vech(chol)) with vech taken column-major over the
/// lower triangle.
struct VariationalState {
  Eigen::VectorXd mu;
  Eigen::MatrixXd chol;
  Factorization factorization = Factorization::Precision;
  DiagParam diag_param = DiagParam::LogScale;

  int dim() const { return static_cast<int>(mu.size()); }
  int lambda_size() const { return dim() + dim() * (dim() + 1) / 2; }

  Eigen::MatrixXd effective_chol() const;
  Eigen::MatrixXd covariance() const;

  /// Throws on dimension mismatch, non-finite entries, or a singular factor.
  void validate() const;
};

/// Fresh state with per-coordinate standard deviation `sd` and no correlation.
VariationalState make_state(const Eigen::VectorXd& mu, double sd, Factorization factorization,
                            DiagParam diag_param);

/// Same distribution re-expressed with another factorization/diagonal storage.
VariationalState converted(const VariationalState& s, Factorization factorization,
                           DiagParam diag_param);

double log_q(const Eigen::VectorXd& theta, const VariationalState& s);

/// d log q / d theta; valid for both factorizations.
Eigen::VectorXd grad_log_q_theta(const Eigen::VectorXd& theta, const VariationalState& s);

/// d log q / d lambda evaluated at theta (the score with respect to the
/// variational parameters). Defined for the Precision factorization only;
/// throws WrongFactorization otherwise.
Eigen::VectorXd grad_log_q_lambda(const Eigen::VectorXd& theta, const VariationalState& s);

/// Deterministic draw from q given a standard-normal vector eps:
///   Covariance: theta = mu + L eps
///   Precision:  theta = mu + C^{-T} eps (triangular back-substitution)
Eigen::VectorXd sample(const VariationalState& s, const Eigen::VectorXd& eps);

Eigen::VectorXd pack_lambda(const VariationalState& s);
void unpack_lambda(const Eigen::VectorXd& lambda, VariationalState& s);

}  // namespace garchvb
