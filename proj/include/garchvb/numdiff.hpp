#pragma once

#include <Eigen/Dense>

namespace garchvb {

/// Central-difference gradient of a scalar function. The step per coordinate
/// is scaled by max(1, |x_i|). Independent of any analytic gradient code by
/// construction; also used to build proposal curvature for MCMC.
template <class F>
Eigen::VectorXd fd_gradient(F&& fn, const Eigen::VectorXd& x, double step = 1e-6) {
  const auto n = x.size();
  Eigen::VectorXd g(n);
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = step * std::max(1.0, std::fabs(x[i]));
    const double xi = x[i];
    xp[i] = xi + h;
    const double fp = fn(xp);
    xp[i] = xi - h;
    const double fm = fn(xp);
    xp[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

/// Symmetrized central-difference Hessian obtained by differencing a gradient
/// function grad: R^n -> R^n.
template <class G>
Eigen::MatrixXd fd_hessian(G&& grad, const Eigen::VectorXd& x, double step = 1e-5) {
  const auto n = x.size();
  Eigen::MatrixXd h(n, n);
  Eigen::VectorXd xp = x;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double hj = step * std::max(1.0, std::fabs(x[j]));
    const double xj = x[j];
    xp[j] = xj + hj;
    const Eigen::VectorXd gp = grad(xp);
    xp[j] = xj - hj;
    const Eigen::VectorXd gm = grad(xp);
    xp[j] = xj;
    h.col(j) = (gp - gm) / (2.0 * hj);
  }
  return 0.5 * (h + h.transpose());
}

}  // namespace garchvb
