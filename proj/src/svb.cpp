#include "garchvb/svb.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "garchvb/errors.hpp"

namespace garchvb {

namespace {

Factorization method_factorization(Method m) {
  return m == Method::Reparameterization ? Factorization::Covariance : Factorization::Precision;
}

DiagParam method_diag(Method m) {
  return m == Method::Reparameterization ? DiagParam::Free : DiagParam::LogScale;
}

}  // namespace

void OptimizerConfig::validate(Method method) const {
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
    throw UsageError("beta1/beta2 must lie in [0,1)");
  if (!(eta0 > 0.0) || !(tau > 0.0)) throw UsageError("eta0 and tau must be positive");
  if (window < 1 || patience < 1 || max_iters < 1)
    throw UsageError("window, patience, and max_iters must be at least 1");
  const int min_s = method == Method::Reparameterization ? 1 : 2;
  if (mc_samples < min_s) throw InsufficientSamples("mc_samples too small for this estimator");
}

double h_lambda(const Eigen::VectorXd& theta, const VariationalState& s, const LogTarget& target) {
  return target.log_density(theta) - log_q(theta, s);
}

void adam_step(Eigen::VectorXd& lambda, const Eigen::VectorXd& grad, Eigen::VectorXd& gbar,
               Eigen::VectorXd& vbar, int t, const OptimizerConfig& cfg) {
  if (grad.size() != lambda.size()) throw DimensionMismatch("gradient and lambda sizes differ");
  if (!grad.allFinite()) throw NonFiniteError("gradient estimate is not finite");
  if (t < 1) throw UsageError("iteration counter is 1-based");
  if (t == 1) {
    gbar = grad;
    vbar = grad.cwiseProduct(grad);
  } else {
    gbar = cfg.beta1 * gbar + (1.0 - cfg.beta1) * grad;
    vbar = cfg.beta2 * vbar + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
  }
  const double step = std::min(cfg.eta0, cfg.eta0 * cfg.tau / static_cast<double>(t));
  lambda.array() += step * gbar.array() / (vbar.array().sqrt() + 1e-8);
}

Eigen::VectorXd control_variates(const Eigen::VectorXd& h, const Eigen::MatrixXd& score) {
  const auto S = score.rows();
  if (h.size() != S) throw DimensionMismatch("h and score row counts differ");
  if (S < 2) throw InsufficientSamples("control variates need at least 2 draws");
  Eigen::VectorXd c(score.cols());
  for (Eigen::Index j = 0; j < score.cols(); ++j) {
    const Eigen::VectorXd g = score.col(j);
    const Eigen::VectorXd hg = h.cwiseProduct(g);
    const double gm = g.mean();
    const double hgm = hg.mean();
    double var = 0.0, cov = 0.0;
    for (Eigen::Index i = 0; i < S; ++i) {
      var += (g[i] - gm) * (g[i] - gm);
      cov += (g[i] - gm) * (hg[i] - hgm);
    }
    var /= static_cast<double>(S - 1);
    cov /= static_cast<double>(S - 1);
    c[j] = var < 1e-12 ? 0.0 : cov / var;
  }
  return c;
}

CvEstimate cv_gradient(const LogTarget& target, const VariationalState& s, int S,
                       const Eigen::VectorXd& c, Rng& rng) {
  if (s.factorization != Factorization::Precision)
    throw WrongFactorization("the score-based estimator runs on the Precision factorization");
  if (S < 2) throw InsufficientSamples("need at least 2 draws");
  const int d = s.dim();
  const int nl = s.lambda_size();
  if (c.size() != 0 && c.size() != nl) throw DimensionMismatch("c has wrong length");
  CvEstimate est;
  est.h.resize(S);
  est.score.resize(S, nl);
  est.grad = Eigen::VectorXd::Zero(nl);
  Eigen::VectorXd eps(d);
  for (int i = 0; i < S; ++i) {
    for (int k = 0; k < d; ++k) eps[k] = rng.normal();
    const Eigen::VectorXd theta = sample(s, eps);
    est.h[i] = target.log_density(theta) - log_q(theta, s);
    est.score.row(i) = grad_log_q_lambda(theta, s);
  }
  for (int j = 0; j < nl; ++j) {
    const double cj = c.size() == 0 ? 0.0 : c[j];
    double acc = 0.0;
    for (int i = 0; i < S; ++i) acc += (est.h[i] - cj) * est.score(i, j);
    est.grad[j] = acc / static_cast<double>(S);
  }
  return est;
}

RtEstimate rt_gradient(const LogTarget& target, const VariationalState& s, int S, Rng& rng) {
  if (s.factorization != Factorization::Covariance)
    throw WrongFactorization("the pathwise estimator runs on the Covariance factorization");
  if (S < 1) throw InsufficientSamples("need at least 1 draw");
  const int d = s.dim();
  const int nl = s.lambda_size();
  const Eigen::MatrixXd eff = s.effective_chol();
  RtEstimate est;
  est.h.resize(S);
  est.grad = Eigen::VectorXd::Zero(nl);
  Eigen::VectorXd eps(d), tgrad(d);
  for (int i = 0; i < S; ++i) {
    for (int k = 0; k < d; ++k) eps[k] = rng.normal();
    const Eigen::VectorXd theta = s.mu + eff.triangularView<Eigen::Lower>() * eps;
    const double lf = target.log_density_grad(theta, tgrad);
    est.h[i] = lf - log_q(theta, s);
    const Eigen::VectorXd hgrad = tgrad - grad_log_q_theta(theta, s);
    est.grad.head(d) += hgrad;
    int k = d;
    for (int cj = 0; cj < d; ++cj)
      for (int ri = cj; ri < d; ++ri) est.grad[k++] += hgrad[ri] * eps[cj];
  }
  est.grad /= static_cast<double>(S);
  if (s.diag_param == DiagParam::LogScale) {
    int k = d;
    for (int cj = 0; cj < d; ++cj)
      for (int ri = cj; ri < d; ++ri) {
        if (ri == cj) est.grad[k] *= eff(ri, ri);
        ++k;
      }
  }
  return est;
}

FitResult fit_svb(const LogTarget& target, Method method, const OptimizerConfig& cfg,
                  const VariationalState& init) {
  cfg.validate(method);
  init.validate();
  if (init.dim() != target.dim()) throw DimensionMismatch("init dimension differs from target");
  const auto t_start = std::chrono::steady_clock::now();

  const Factorization fac = method_factorization(method);
  const DiagParam dp = method_diag(method);
  VariationalState state =
      (init.factorization == fac && init.diag_param == dp) ? init : converted(init, fac, dp);
  const int d = state.dim();
  if (method == Method::MeanField)
    for (int j = 0; j < d; ++j)
      for (int i = j + 1; i < d; ++i) state.chol(i, j) = 0.0;

  Rng rng(cfg.seed);
  Eigen::VectorXd lambda = pack_lambda(state);
  Eigen::VectorXd gbar, vbar;
  Eigen::VectorXd c;  // empty = no control variates on the first iteration

  FitResult result;
  result.elbo_trace.reserve(std::min(cfg.max_iters, 4096));
  double best_window = -std::numeric_limits<double>::infinity();
  double window_sum = 0.0;
  int patience_used = 0;
  result.stopped_by = StopReason::MaxIterations;

  for (int t = 1; t <= cfg.max_iters; ++t) {
    Eigen::VectorXd grad;
    double elbo;
    if (method == Method::Reparameterization) {
      RtEstimate est = rt_gradient(target, state, cfg.mc_samples, rng);
      grad = std::move(est.grad);
      elbo = est.h.mean();
    } else {
      CvEstimate est = cv_gradient(target, state, cfg.mc_samples, c, rng);
      grad = std::move(est.grad);
      elbo = est.h.mean();
      c = control_variates(est.h, est.score);
      if (method == Method::MeanField) {
        int k = d;
        for (int cj = 0; cj < d; ++cj)
          for (int ri = cj; ri < d; ++ri) {
            if (ri != cj) grad[k] = 0.0;
            ++k;
          }
      }
    }
    result.elbo_trace.push_back(elbo);
    adam_step(lambda, grad, gbar, vbar, t, cfg);
    unpack_lambda(lambda, state);
    result.iterations = t;

    window_sum += elbo;
    if (t > cfg.window) window_sum -= result.elbo_trace[t - cfg.window - 1];
    if (t >= cfg.window) {
      const double wmean = window_sum / cfg.window;
      if (wmean >= best_window) {
        best_window = wmean;
        patience_used = 0;
      } else if (++patience_used >= cfg.patience) {
        result.stopped_by = StopReason::Patience;
        break;
      }
    }
  }

  const int n = static_cast<int>(result.elbo_trace.size());
  const int w = std::min(cfg.window, n);
  double tail = 0.0;
  for (int i = n - w; i < n; ++i) tail += result.elbo_trace[i];
  result.final_window_elbo = tail / w;
  result.state = std::move(state);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

FitResult fit_svb(std::span<const double> y, InnovationKind kind, Method method,
                  const OptimizerConfig& cfg, const std::optional<VariationalState>& init) {
  GarchPosterior target(std::vector<double>(y.begin(), y.end()), kind);
  if (init) return fit_svb(target, method, cfg, *init);
  const VariationalState start = make_state(default_start_theta(y, kind), 0.1,
                                            method_factorization(method), method_diag(method));
  return fit_svb(target, method, cfg, start);
}

Eigen::MatrixXd constrained_draws(const VariationalState& s, InnovationKind kind, int n,
                                  Rng& rng) {
  if (s.dim() != param_count(kind)) throw DimensionMismatch("state dimension differs from kind");
  if (n < 1) throw InsufficientSamples("need at least 1 draw");
  const int d = s.dim();
  Eigen::MatrixXd draws(n, d);
  Eigen::VectorXd eps(d);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) eps[k] = rng.normal();
    const GarchParams p = to_constrained(sample(s, eps), kind);
    draws(i, 0) = p.omega;
    draws(i, 1) = p.alpha;
    draws(i, 2) = p.beta;
    if (d > 3) draws(i, 3) = *p.nu;
    if (d > 4) draws(i, 4) = *p.xi;
  }
  return draws;
}

std::string to_string(Method method) {
  switch (method) {
    case Method::ControlVariates: return "cv";
    case Method::Reparameterization: return "rt";
    case Method::MeanField: return "mf";
  }
  throw UsageError("unknown method");
}

Method method_from_string(const std::string& name) {
  if (name == "cv") return Method::ControlVariates;
  if (name == "rt") return Method::Reparameterization;
  if (name == "mf" || name == "meanfield") return Method::MeanField;
  throw UsageError("unknown method '" + name + "' (expected cv, rt, or mf)");
}

}  // namespace garchvb
