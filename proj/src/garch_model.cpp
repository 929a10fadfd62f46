#include "garchvb/garch_model.hpp"

#include <cmath>
#include <numbers>

#include "garchvb/errors.hpp"
#include "garchvb/math_utils.hpp"

namespace garchvb {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

// Constrained quantities shared by every evaluation, derived once per call.
struct VarianceCoefs {
  double omega, psi1, omps1, psi2, omps2, alpha, beta;
  double D1, D2, D3, D4;  // recursion coefficients of the sensitivity paths
};

VarianceCoefs variance_coefs(const Eigen::VectorXd& theta) {
  VarianceCoefs c;
  c.omega = std::exp(theta[0]);
  c.psi1 = sigmoid(theta[1]);
  c.omps1 = sigmoid(-theta[1]);
  c.psi2 = sigmoid(theta[2]);
  c.omps2 = sigmoid(-theta[2]);
  c.alpha = c.psi1 * c.psi2;
  c.beta = c.psi1 * c.omps2;
  c.D1 = c.alpha * c.omps1;
  c.D2 = c.beta * c.omps1;
  c.D3 = c.alpha * c.omps2;
  c.D4 = -c.beta * c.psi2;
  return c;
}

void check_theta(const Eigen::VectorXd& theta, InnovationKind kind) {
  if (theta.size() != param_count(kind))
    throw DimensionMismatch("theta has wrong length for innovation kind");
  if (!theta.allFinite()) throw NonFiniteError("theta must be finite");
}

void check_series(std::span<const double> y) {
  if (y.size() < 2) throw DegenerateSeries("need at least 2 observations");
  for (double v : y)
    if (!std::isfinite(v)) throw DegenerateSeries("series contains non-finite values");
}

void check_window(std::span<const double> y, int sum_from) {
  check_series(y);
  if (sum_from < 0 || sum_from >= static_cast<int>(y.size()))
    throw DimensionMismatch("sum_from outside the series");
}

[[noreturn]] void bad_sigma2() {
  throw NonFiniteError("conditional variance became non-finite or non-positive");
}

double eval_gaussian(const Eigen::VectorXd& theta, std::span<const double> y, int sum_from,
                     Eigen::VectorXd* grad) {
  const VarianceCoefs c = variance_coefs(theta);
  const int T = static_cast<int>(y.size());
  double sig2 = c.omega / c.omps1;
  double d0 = sig2, d1 = sig2 * c.psi1, d2 = 0.0;
  double acc = 0.0, g0 = 0.0, g1 = 0.0, g2 = 0.0;
  for (int t = 0; t < T; ++t) {
    if (t > 0) {
      const double y2 = y[t - 1] * y[t - 1];
      d0 = c.omega + c.beta * d0;
      d1 = c.D1 * y2 + c.D2 * sig2 + c.beta * d1;
      d2 = c.D3 * y2 + c.D4 * sig2 + c.beta * d2;
      sig2 = c.omega + c.alpha * y2 + c.beta * sig2;
    }
    if (!(sig2 > 0.0) || !std::isfinite(sig2)) bad_sigma2();
    if (t < sum_from) continue;
    const double z2 = y[t] * y[t] / sig2;
    acc += std::log(sig2) + z2;
    if (grad) {
      const double w = 0.5 * (z2 - 1.0) / sig2;
      g0 += w * d0;
      g1 += w * d1;
      g2 += w * d2;
    }
  }
  if (grad) {
    (*grad)[0] = g0;
    (*grad)[1] = g1;
    (*grad)[2] = g2;
  }
  const int W = T - sum_from;
  return -0.5 * (W * kLog2Pi + acc);
}

double eval_studentt(const Eigen::VectorXd& theta, std::span<const double> y, int sum_from,
                     Eigen::VectorXd* grad) {
  const VarianceCoefs c = variance_coefs(theta);
  const double nm2 = softplus(theta[3]);  // nu - 2, kept separately for small nu
  const double nu = nm2 + 2.0;
  const double cobs =
      std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(std::numbers::pi * nm2);
  const double B = grad ? 0.5 * digamma(0.5 * (nu + 1.0)) - 0.5 * digamma(0.5 * nu) - 0.5 / nm2
                        : 0.0;
  const int T = static_cast<int>(y.size());
  double sig2 = c.omega / c.omps1;
  double d0 = sig2, d1 = sig2 * c.psi1, d2 = 0.0;
  double acc = 0.0, g0 = 0.0, g1 = 0.0, g2 = 0.0, gnu = 0.0;
  for (int t = 0; t < T; ++t) {
    if (t > 0) {
      const double y2 = y[t - 1] * y[t - 1];
      d0 = c.omega + c.beta * d0;
      d1 = c.D1 * y2 + c.D2 * sig2 + c.beta * d1;
      d2 = c.D3 * y2 + c.D4 * sig2 + c.beta * d2;
      sig2 = c.omega + c.alpha * y2 + c.beta * sig2;
    }
    if (!(sig2 > 0.0) || !std::isfinite(sig2)) bad_sigma2();
    if (t < sum_from) continue;
    const double k = y[t] * y[t] / (nm2 * sig2);
    const double l1p = std::log1p(k);
    acc += std::log(sig2) + (nu + 1.0) * l1p;
    if (grad) {
      const double w = 0.5 * ((nu + 1.0) * k / (1.0 + k) - 1.0) / sig2;
      g0 += w * d0;
      g1 += w * d1;
      g2 += w * d2;
      gnu += (nu + 1.0) * k / (2.0 * nm2 * (1.0 + k)) - 0.5 * l1p;
    }
  }
  const int W = T - sum_from;
  if (grad) {
    (*grad)[0] = g0;
    (*grad)[1] = g1;
    (*grad)[2] = g2;
    (*grad)[3] = sigmoid(theta[3]) * (W * B + gnu);
  }
  return W * cobs - 0.5 * acc;
}

double eval_skewt(const Eigen::VectorXd& theta, std::span<const double> y, int sum_from,
                  Eigen::VectorXd* grad) {
  const VarianceCoefs c = variance_coefs(theta);
  const double nm2 = softplus(theta[3]);
  const double nu = nm2 + 2.0;
  const double xi = softplus(theta[4]);
  const double xi2 = xi * xi;
  const double base =
      std::exp(std::lgamma(0.5 * (nu - 1.0)) - std::lgamma(0.5 * nu)) * std::sqrt(nm2) /
      std::sqrt(std::numbers::pi);
  const double m = base * (xi - 1.0 / xi);
  const double s2 = xi2 + 1.0 / xi2 - 1.0 - m * m;
  const double s = std::sqrt(s2);
  const double cobs = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                      0.5 * std::log(std::numbers::pi * nm2) +
                      std::log(2.0 / (xi + 1.0 / xi)) + std::log(s);

  double dm_dnu = 0.0, ds_dnu = 0.0, dm_dxi = 0.0, ds_dxi = 0.0, Bnu = 0.0, Bxi = 0.0;
  if (grad) {
    const double dbase =
        base * (0.5 * digamma(0.5 * (nu - 1.0)) + 0.5 / nm2 - 0.5 * digamma(0.5 * nu));
    dm_dnu = (xi - 1.0 / xi) * dbase;
    ds_dnu = -(m / s) * dm_dnu;
    dm_dxi = base * (1.0 + 1.0 / xi2);
    ds_dxi = (2.0 * xi - 2.0 / (xi2 * xi) - 2.0 * m * dm_dxi) / (2.0 * s);
    Bnu = 0.5 * digamma(0.5 * (nu + 1.0)) - 0.5 * digamma(0.5 * nu) - 0.5 / nm2 + ds_dnu / s;
    Bxi = -(xi2 - 1.0) / (xi2 * xi + xi) + ds_dxi / s;
  }

  const int T = static_cast<int>(y.size());
  double sig2 = c.omega / c.omps1;
  double d0 = sig2, d1 = sig2 * c.psi1, d2 = 0.0;
  double acc = 0.0, g0 = 0.0, g1 = 0.0, g2 = 0.0, gnu = 0.0, gxi = 0.0;
  for (int t = 0; t < T; ++t) {
    if (t > 0) {
      const double y2 = y[t - 1] * y[t - 1];
      d0 = c.omega + c.beta * d0;
      d1 = c.D1 * y2 + c.D2 * sig2 + c.beta * d1;
      d2 = c.D3 * y2 + c.D4 * sig2 + c.beta * d2;
      sig2 = c.omega + c.alpha * y2 + c.beta * sig2;
    }
    if (!(sig2 > 0.0) || !std::isfinite(sig2)) bad_sigma2();
    if (t < sum_from) continue;
    const double sigt = std::sqrt(sig2);
    const double z = y[t] / sigt;
    const double u = s * z + m;
    const double isign = u >= 0.0 ? 1.0 : -1.0;
    const double xi_m2I = u >= 0.0 ? 1.0 / xi2 : xi2;  // xi^(-2 I_t)
    const double q = u * u * xi_m2I / nm2;
    const double f = std::log1p(q);
    acc += std::log(sig2) + (nu + 1.0) * f;
    if (grad) {
      const double Ct = s * (nu + 1.0) * u * z * xi_m2I / (nm2 * (1.0 + q));
      const double w = 0.5 * (Ct - 1.0) / sig2;
      g0 += w * d0;
      g1 += w * d1;
      g2 += w * d2;
      const double dg = 2.0 * u * (z * ds_dnu + dm_dnu) / nm2 - u * u / (nm2 * nm2);
      gnu += -0.5 * ((1.0 + nu) * xi_m2I * dg / (1.0 + q) + f);
      const double dr =
          2.0 * u * (z * ds_dxi + dm_dxi) * xi_m2I - 2.0 * isign * u * u * xi_m2I / xi;
      gxi += -0.5 * (1.0 + nu) * (dr / nm2) / (1.0 + q);
    }
  }
  const int W = T - sum_from;
  if (grad) {
    (*grad)[0] = g0;
    (*grad)[1] = g1;
    (*grad)[2] = g2;
    (*grad)[3] = sigmoid(theta[3]) * (W * Bnu + gnu);
    (*grad)[4] = sigmoid(theta[4]) * (W * Bxi + gxi);
  }
  return W * cobs - 0.5 * acc;
}

double eval(const Eigen::VectorXd& theta, std::span<const double> y, InnovationKind kind,
            int sum_from, Eigen::VectorXd* grad) {
  check_theta(theta, kind);
  check_window(y, sum_from);
  switch (kind) {
    case InnovationKind::Gaussian: return eval_gaussian(theta, y, sum_from, grad);
    case InnovationKind::StudentT: return eval_studentt(theta, y, sum_from, grad);
    case InnovationKind::SkewT: return eval_skewt(theta, y, sum_from, grad);
  }
  throw UsageError("unknown innovation kind");
}

}  // namespace

std::vector<double> variance_recursion(const Eigen::VectorXd& theta, std::span<const double> y) {
  if (theta.size() < 3) throw DimensionMismatch("theta needs at least the 3 variance parameters");
  if (!theta.head(3).allFinite()) throw NonFiniteError("theta must be finite");
  check_series(y);
  const VarianceCoefs c = variance_coefs(theta);
  std::vector<double> sig2(y.size());
  sig2[0] = c.omega / c.omps1;
  for (std::size_t t = 1; t < y.size(); ++t)
    sig2[t] = c.omega + c.alpha * y[t - 1] * y[t - 1] + c.beta * sig2[t - 1];
  for (double v : sig2)
    if (!(v > 0.0) || !std::isfinite(v)) bad_sigma2();
  return sig2;
}

Eigen::MatrixXd variance_sensitivities(const Eigen::VectorXd& theta, std::span<const double> y) {
  if (theta.size() < 3) throw DimensionMismatch("theta needs at least the 3 variance parameters");
  if (!theta.head(3).allFinite()) throw NonFiniteError("theta must be finite");
  check_series(y);
  const VarianceCoefs c = variance_coefs(theta);
  const int T = static_cast<int>(y.size());
  Eigen::MatrixXd d(T, 3);
  double sig2 = c.omega / c.omps1;
  d(0, 0) = sig2;
  d(0, 1) = sig2 * c.psi1;
  d(0, 2) = 0.0;
  for (int t = 1; t < T; ++t) {
    const double y2 = y[t - 1] * y[t - 1];
    d(t, 0) = c.omega + c.beta * d(t - 1, 0);
    d(t, 1) = c.D1 * y2 + c.D2 * sig2 + c.beta * d(t - 1, 1);
    d(t, 2) = c.D3 * y2 + c.D4 * sig2 + c.beta * d(t - 1, 2);
    sig2 = c.omega + c.alpha * y2 + c.beta * sig2;
  }
  return d;
}

SkewTConstants skewt_constants(double nu, double xi) {
  if (!(nu > 2.0)) throw ConstraintViolation("nu must exceed 2");
  if (!(xi > 0.0)) throw ConstraintViolation("xi must be positive");
  const double base = std::exp(std::lgamma(0.5 * (nu - 1.0)) - std::lgamma(0.5 * nu)) *
                      std::sqrt(nu - 2.0) / std::sqrt(std::numbers::pi);
  SkewTConstants c;
  c.m = base * (xi - 1.0 / xi);
  c.s = std::sqrt(xi * xi + 1.0 / (xi * xi) - 1.0 - c.m * c.m);
  return c;
}

double studentt_log_pdf(double x, double nu) {
  if (!(nu > 2.0)) throw ConstraintViolation("nu must exceed 2");
  const double nm2 = nu - 2.0;
  return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
         0.5 * std::log(std::numbers::pi * nm2) - 0.5 * (nu + 1.0) * std::log1p(x * x / nm2);
}

double skewt_log_pdf(double x, double nu, double xi) {
  const SkewTConstants c = skewt_constants(nu, xi);
  const double u = c.s * x + c.m;
  const double scaled = u >= 0.0 ? u / xi : u * xi;
  return std::log(2.0 / (xi + 1.0 / xi)) + std::log(c.s) + studentt_log_pdf(scaled, nu);
}

double log_likelihood(const Eigen::VectorXd& theta, std::span<const double> y,
                      InnovationKind kind, int sum_from) {
  return eval(theta, y, kind, sum_from, nullptr);
}

Eigen::VectorXd grad_log_likelihood(const Eigen::VectorXd& theta, std::span<const double> y,
                                    InnovationKind kind, int sum_from) {
  Eigen::VectorXd grad(param_count(kind));
  eval(theta, y, kind, sum_from, &grad);
  return grad;
}

double log_likelihood_grad(const Eigen::VectorXd& theta, std::span<const double> y,
                           InnovationKind kind, Eigen::VectorXd& grad, int sum_from) {
  grad.resize(param_count(kind));
  return eval(theta, y, kind, sum_from, &grad);
}

Eigen::VectorXd default_start_theta(std::span<const double> y, InnovationKind kind) {
  if (y.size() < 2) throw DegenerateSeries("need at least 2 observations");
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double var = 0.0;
  for (double v : y) var += (v - mean) * (v - mean);
  var /= static_cast<double>(y.size());
  if (!(var > 0.0)) throw DegenerateSeries("series has zero variance");
  GarchParams p;
  p.omega = 0.05 * var;
  p.alpha = 0.1;
  p.beta = 0.8;
  if (kind != InnovationKind::Gaussian) p.nu = 8.0;
  if (kind == InnovationKind::SkewT) p.xi = 1.0;
  return to_unconstrained(p, kind);
}

}  // namespace garchvb
