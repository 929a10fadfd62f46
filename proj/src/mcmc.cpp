#include "garchvb/mcmc.hpp"

#include <cmath>
#include <limits>

#include "garchvb/errors.hpp"
#include "garchvb/garch_model.hpp"
#include "garchvb/numdiff.hpp"
#include "garchvb/target.hpp"

namespace garchvb {

namespace {
constexpr double kGradTol = 1e-5;
constexpr int kMaxMleIters = 5000;
constexpr int kAdamWarmup = 400;
}  // namespace

MleResult mle(std::span<const double> y, InnovationKind kind,
              const std::optional<Eigen::VectorXd>& theta0) {
  Eigen::VectorXd theta = theta0 ? *theta0 : default_start_theta(y, kind);
  if (theta.size() != param_count(kind))
    throw DimensionMismatch("theta0 has wrong length for innovation kind");

  auto value = [&](const Eigen::VectorXd& th) { return log_likelihood(th, y, kind); };
  auto gradient = [&](const Eigen::VectorXd& th) { return grad_log_likelihood(th, y, kind); };

  MleResult result;
  int used = 0;

  // ADAM warmup to reach the basin of attraction.
  Eigen::VectorXd g = gradient(theta);
  Eigen::VectorXd gbar = g, vbar = g.cwiseProduct(g);
  for (; used < kAdamWarmup && g.lpNorm<Eigen::Infinity>() >= kGradTol; ++used) {
    const double step = std::min(0.05, 0.05 * 200.0 / (used + 1.0));
    theta.array() += step * gbar.array() / (vbar.array().sqrt() + 1e-8);
    g = gradient(theta);
    gbar = 0.9 * gbar + 0.1 * g;
    vbar = 0.9 * vbar + 0.1 * g.cwiseProduct(g);
  }

  // Damped Newton refinement; quadratic near the optimum, falls back to
  // heavier damping whenever a step fails to improve the likelihood.
  double ll = value(theta);
  double damping = 1e-6;
  while (used < kMaxMleIters) {
    g = gradient(theta);
    if (g.lpNorm<Eigen::Infinity>() < kGradTol) {
      result.converged = true;
      break;
    }
    ++used;
    const Eigen::MatrixXd h = fd_hessian(gradient, theta);
    bool stepped = false;
    for (int attempt = 0; attempt < 40 && !stepped; ++attempt) {
      Eigen::MatrixXd a = -h;
      a.diagonal().array() += damping;
      const Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
      if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        const Eigen::VectorXd p = ldlt.solve(g);
        const Eigen::VectorXd trial = theta + p;
        const double trial_ll = value(trial);
        if (std::isfinite(trial_ll) && trial_ll >= ll - 1e-12 * std::fabs(ll)) {
          theta = trial;
          ll = trial_ll;
          damping = std::max(damping / 10.0, 1e-10);
          stepped = true;
          break;
        }
      }
      damping = std::min(damping * 10.0, 1e8);
    }
    if (!stepped) break;  // damping exhausted; report the best point found
  }

  result.theta = theta;
  result.log_lik = value(theta);
  result.hessian = fd_hessian(gradient, theta);
  result.iterations = used;
  return result;
}

Eigen::MatrixXd rwmh_chain(const std::function<double(const Eigen::VectorXd&)>& log_target,
                           const Eigen::VectorXd& init, const Eigen::MatrixXd& proposal_chol,
                           int iterations, int burnin, Rng& rng, double* acceptance_rate) {
  const int d = static_cast<int>(init.size());
  if (proposal_chol.rows() != d || proposal_chol.cols() != d)
    throw DimensionMismatch("proposal factor must be d x d");
  if (iterations < 1 || burnin < 0 || burnin >= iterations)
    throw UsageError("need 0 <= burnin < iterations");
  Eigen::VectorXd current = init;
  double current_lp = log_target(current);
  if (!std::isfinite(current_lp)) throw NonFiniteError("log target not finite at the start point");
  Eigen::MatrixXd draws(iterations - burnin, d);
  Eigen::VectorXd eps(d);
  long accepted = 0;
  for (int it = 0; it < iterations; ++it) {
    for (int k = 0; k < d; ++k) eps[k] = rng.normal();
    const Eigen::VectorXd proposal =
        current + proposal_chol.triangularView<Eigen::Lower>() * eps;
    const double proposal_lp = log_target(proposal);
    const double log_ratio = proposal_lp - current_lp;
    if (std::isfinite(proposal_lp) &&
        (log_ratio >= 0.0 || std::log(rng.uniform()) < log_ratio)) {
      current = proposal;
      current_lp = proposal_lp;
      ++accepted;
    }
    if (it >= burnin) draws.row(it - burnin) = current;
  }
  if (acceptance_rate) *acceptance_rate = static_cast<double>(accepted) / iterations;
  return draws;
}

PosteriorSamples rwmh(std::span<const double> y, InnovationKind kind, const McmcConfig& cfg) {
  const int d = param_count(kind);
  const int burnin = cfg.burnin < 0 ? cfg.iterations / 10 : cfg.burnin;
  const double scale = cfg.proposal_scale > 0.0 ? cfg.proposal_scale : 2.38 / std::sqrt(d);

  PosteriorSamples out;
  out.mode = mle(y, kind);
  out.names = param_names(kind);

  // Proposal covariance from the curvature at the mode.
  Eigen::MatrixXd proposal_chol;
  const Eigen::LLT<Eigen::MatrixXd> neg_h((-out.mode.hessian).eval());
  bool ok = neg_h.info() == Eigen::Success;
  if (ok) {
    const Eigen::MatrixXd cov =
        neg_h.solve(Eigen::MatrixXd::Identity(d, d));  // (-H)^{-1}
    const Eigen::LLT<Eigen::MatrixXd> cov_llt(cov);
    ok = cov_llt.info() == Eigen::Success && cov.allFinite();
    if (ok) proposal_chol = scale * Eigen::MatrixXd(cov_llt.matrixL());
  }
  if (!ok) {
    out.fallback_proposal = true;
    proposal_chol = 0.1 * Eigen::MatrixXd::Identity(d, d);  // covariance 0.01 I
  }

  GarchPosterior posterior(std::vector<double>(y.begin(), y.end()), kind);
  auto target = [&](const Eigen::VectorXd& th) { return posterior.log_density(th); };
  Rng rng(cfg.seed);
  const Eigen::MatrixXd chain = rwmh_chain(target, out.mode.theta, proposal_chol,
                                           cfg.iterations, burnin, rng, &out.acceptance_rate);

  out.draws.resize(chain.rows(), d);
  for (Eigen::Index i = 0; i < chain.rows(); ++i) {
    const GarchParams p = to_constrained(chain.row(i).transpose(), kind);
    out.draws(i, 0) = p.omega;
    out.draws(i, 1) = p.alpha;
    out.draws(i, 2) = p.beta;
    if (d > 3) out.draws(i, 3) = *p.nu;
    if (d > 4) out.draws(i, 4) = *p.xi;
  }
  return out;
}

ChainDiagnostics chain_diagnostics(const Eigen::MatrixXd& draws) {
  const auto n = draws.rows();
  const auto d = draws.cols();
  if (n < 4) throw InsufficientSamples("need at least 4 draws for diagnostics");
  ChainDiagnostics diag;
  diag.ess.resize(d);
  diag.split_rhat.resize(d);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (Eigen::Index j = 0; j < d; ++j) {
    const Eigen::VectorXd x = draws.col(j);
    const double mean = x.mean();
    const Eigen::VectorXd cx = x.array() - mean;
    const double c0 = cx.squaredNorm() / n;
    if (!(c0 > 0.0)) {
      diag.ess[j] = 1.0;
      diag.split_rhat[j] = nan;
      continue;
    }

    // Integrated autocorrelation time truncated at the first non-positive
    // even/odd lag pair sum.
    auto rho = [&](Eigen::Index k) {
      double acc = 0.0;
      for (Eigen::Index t = 0; t + k < n; ++t) acc += cx[t] * cx[t + k];
      return acc / (n * c0);
    };
    double tau = 0.0;
    for (Eigen::Index k = 0; 2 * k + 1 < n - 1; ++k) {
      const double pair = rho(2 * k) + rho(2 * k + 1);
      if (pair <= 0.0) break;
      tau += 2.0 * pair;
    }
    tau -= 1.0;  // the k=0 pair double-counts rho_0 = 1
    if (tau < 1.0) tau = 1.0;
    diag.ess[j] = static_cast<double>(n) / tau;

    // Split the chain in halves and compare within/between variance.
    const Eigen::Index half = n / 2;
    const Eigen::VectorXd a = x.head(half);
    const Eigen::VectorXd b = x.segment(half, half);
    const double ma = a.mean(), mb = b.mean();
    const double va = (a.array() - ma).matrix().squaredNorm() / (half - 1);
    const double vb = (b.array() - mb).matrix().squaredNorm() / (half - 1);
    const double w = 0.5 * (va + vb);
    if (!(w > 0.0)) {
      diag.split_rhat[j] = nan;
      continue;
    }
    const double grand = 0.5 * (ma + mb);
    const double bvar = half * ((ma - grand) * (ma - grand) + (mb - grand) * (mb - grand));
    const double var_plus = (half - 1.0) / half * w + bvar / half;
    diag.split_rhat[j] = std::sqrt(var_plus / w);
  }
  return diag;
}

}  // namespace garchvb
