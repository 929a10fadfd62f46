#include "garchvb/variational.hpp"

#include <cmath>

#include "garchvb/errors.hpp"

namespace garchvb {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;

void check_theta_dim(const Eigen::VectorXd& theta, const VariationalState& s) {
  if (theta.size() != s.mu.size()) throw DimensionMismatch("theta and state dimensions differ");
}
}  // namespace

Eigen::MatrixXd VariationalState::effective_chol() const {
  Eigen::MatrixXd e = chol;
  if (diag_param == DiagParam::LogScale)
    for (int i = 0; i < dim(); ++i) e(i, i) = std::exp(chol(i, i));
  return e;
}

Eigen::MatrixXd VariationalState::covariance() const {
  const Eigen::MatrixXd e = effective_chol();
  if (factorization == Factorization::Covariance) return e * e.transpose();
  // Sigma = (C C^T)^{-1}
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim(), dim());
  const Eigen::MatrixXd cinv = e.triangularView<Eigen::Lower>().solve(id);
  return cinv.transpose() * cinv;
}

void VariationalState::validate() const {
  const int d = dim();
  if (d == 0) throw DimensionMismatch("empty variational state");
  if (chol.rows() != d || chol.cols() != d)
    throw DimensionMismatch("chol must be d x d");
  if (!mu.allFinite() || !chol.allFinite())
    throw NonFiniteError("variational state has non-finite entries");
  const Eigen::MatrixXd e = effective_chol();
  for (int i = 0; i < d; ++i)
    if (e(i, i) == 0.0) throw ConstraintViolation("variational factor is singular");
}

VariationalState make_state(const Eigen::VectorXd& mu, double sd, Factorization factorization,
                            DiagParam diag_param) {
  if (!(sd > 0.0)) throw ConstraintViolation("sd must be positive");
  const int d = static_cast<int>(mu.size());
  VariationalState s;
  s.mu = mu;
  s.factorization = factorization;
  s.diag_param = diag_param;
  // Diagonal factor whose implied q has standard deviation sd per coordinate.
  const double eff = factorization == Factorization::Covariance ? sd : 1.0 / sd;
  const double raw = diag_param == DiagParam::LogScale ? std::log(eff) : eff;
  s.chol = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) s.chol(i, i) = raw;
  return s;
}

VariationalState converted(const VariationalState& s, Factorization factorization,
                           DiagParam diag_param) {
  s.validate();
  VariationalState out;
  out.mu = s.mu;
  out.factorization = factorization;
  out.diag_param = diag_param;
  Eigen::MatrixXd eff;
  if (factorization == s.factorization) {
    eff = s.effective_chol();
    // A free-diagonal factor may carry negative diagonal entries; flip those
    // columns' signs before taking logs (the distribution is unchanged).
    if (diag_param == DiagParam::LogScale)
      for (int j = 0; j < out.dim(); ++j)
        if (eff(j, j) < 0.0) eff.col(j) = -eff.col(j);
  } else {
    const Eigen::MatrixXd target_matrix =
        factorization == Factorization::Covariance
            ? s.covariance()
            : s.covariance().inverse().eval();
    Eigen::LLT<Eigen::MatrixXd> llt(target_matrix);
    if (llt.info() != Eigen::Success)
      throw NonFiniteError("factorization conversion failed (matrix not positive definite)");
    eff = llt.matrixL();
  }
  out.chol = eff;
  if (diag_param == DiagParam::LogScale)
    for (int i = 0; i < out.dim(); ++i) out.chol(i, i) = std::log(eff(i, i));
  return out;
}

double log_q(const Eigen::VectorXd& theta, const VariationalState& s) {
  check_theta_dim(theta, s);
  const int d = s.dim();
  const Eigen::MatrixXd e = s.effective_chol();
  double log_det = 0.0;  // log |det factor|
  for (int i = 0; i < d; ++i) log_det += std::log(std::fabs(e(i, i)));
  const Eigen::VectorXd r = theta - s.mu;
  if (s.factorization == Factorization::Precision) {
    const Eigen::VectorXd v = e.transpose() * r;
    return -0.5 * d * kLog2Pi + log_det - 0.5 * v.squaredNorm();
  }
  const Eigen::VectorXd w = e.triangularView<Eigen::Lower>().solve(r);
  return -0.5 * d * kLog2Pi - log_det - 0.5 * w.squaredNorm();
}

Eigen::VectorXd grad_log_q_theta(const Eigen::VectorXd& theta, const VariationalState& s) {
  check_theta_dim(theta, s);
  const Eigen::MatrixXd e = s.effective_chol();
  const Eigen::VectorXd r = theta - s.mu;
  if (s.factorization == Factorization::Precision) return -(e * (e.transpose() * r));
  Eigen::VectorXd w = e.triangularView<Eigen::Lower>().solve(r);
  e.transpose().triangularView<Eigen::Upper>().solveInPlace(w);
  return -w;
}

Eigen::VectorXd grad_log_q_lambda(const Eigen::VectorXd& theta, const VariationalState& s) {
  if (s.factorization != Factorization::Precision)
    throw WrongFactorization("score with respect to lambda requires the Precision factorization");
  check_theta_dim(theta, s);
  const int d = s.dim();
  const Eigen::MatrixXd e = s.effective_chol();
  const Eigen::VectorXd r = theta - s.mu;
  Eigen::VectorXd g(s.lambda_size());
  g.head(d) = e * (e.transpose() * r);
  // d log q / d C = diag(1/C_ii) - r r^T C on the lower triangle.
  const Eigen::MatrixXd rrC = r * (r.transpose() * e);
  int k = d;
  for (int j = 0; j < d; ++j) {
    for (int i = j; i < d; ++i) {
      double v = -rrC(i, j);
      if (i == j) {
        v += 1.0 / e(i, i);
        if (s.diag_param == DiagParam::LogScale) v *= e(i, i);  // chain rule through exp
      }
      g[k++] = v;
    }
  }
  return g;
}

Eigen::VectorXd sample(const VariationalState& s, const Eigen::VectorXd& eps) {
  if (eps.size() != s.mu.size()) throw DimensionMismatch("eps and state dimensions differ");
  const Eigen::MatrixXd e = s.effective_chol();
  if (s.factorization == Factorization::Covariance)
    return s.mu + e.triangularView<Eigen::Lower>() * eps;
  Eigen::VectorXd x = eps;
  e.transpose().triangularView<Eigen::Upper>().solveInPlace(x);
  return s.mu + x;
}

Eigen::VectorXd pack_lambda(const VariationalState& s) {
  const int d = s.dim();
  Eigen::VectorXd lambda(s.lambda_size());
  lambda.head(d) = s.mu;
  int k = d;
  for (int j = 0; j < d; ++j)
    for (int i = j; i < d; ++i) lambda[k++] = s.chol(i, j);
  return lambda;
}

void unpack_lambda(const Eigen::VectorXd& lambda, VariationalState& s) {
  const int d = s.dim();
  if (lambda.size() != s.lambda_size()) throw DimensionMismatch("lambda has wrong length");
  s.mu = lambda.head(d);
  int k = d;
  for (int j = 0; j < d; ++j)
    for (int i = j; i < d; ++i) s.chol(i, j) = lambda[k++];
}

}  // namespace garchvb
