#include <doctest.h>

#include <cmath>
#include <vector>

#include "garchvb/errors.hpp"
#include "garchvb/garch_model.hpp"
#include "garchvb/sequential.hpp"
#include "garchvb/simulate.hpp"
#include "garchvb/target.hpp"

using namespace garchvb;

namespace {

std::vector<double> sim_series(int length, std::uint64_t seed) {
  SimConfig cfg;
  cfg.params = GarchParams{0.1, 0.2, 0.75, {}, {}};
  cfg.kind = InnovationKind::Gaussian;
  cfg.length = length;
  cfg.seed = seed;
  return simulate_garch(cfg);
}

double logdet_cov(const VariationalState& s) {
  return std::log(s.covariance().determinant());
}

}  // namespace

TEST_SUITE("sequential") {
  TEST_CASE("schedule splits the remainder into equal blocks") {
    const UpdateSchedule even = make_schedule(1000, 600, 4);
    CHECK(even.initial == 600);
    REQUIRE(even.windows.size() == 4);
    CHECK(even.windows[0] == std::pair<int, int>(600, 700));
    CHECK(even.windows[1] == std::pair<int, int>(700, 800));
    CHECK(even.windows[2] == std::pair<int, int>(800, 900));
    CHECK(even.windows[3] == std::pair<int, int>(900, 1000));

    // non-divisible remainder goes to the last window
    const UpdateSchedule uneven = make_schedule(1000, 600, 3);
    REQUIRE(uneven.windows.size() == 3);
    CHECK(uneven.windows[0] == std::pair<int, int>(600, 733));
    CHECK(uneven.windows[1] == std::pair<int, int>(733, 866));
    CHECK(uneven.windows[2] == std::pair<int, int>(866, 1000));

    const UpdateSchedule tight = make_schedule(10, 5, 5);
    REQUIRE(tight.windows.size() == 5);
    CHECK(tight.windows[0] == std::pair<int, int>(5, 6));
    CHECK(tight.windows[4] == std::pair<int, int>(9, 10));
  }

  TEST_CASE("schedule rejects impossible splits") {
    CHECK_THROWS_AS(make_schedule(100, 1, 2), UsageError);    // initial too small
    CHECK_THROWS_AS(make_schedule(100, 100, 2), UsageError);  // nothing left to update
    CHECK_THROWS_AS(make_schedule(100, 120, 2), UsageError);
    CHECK_THROWS_AS(make_schedule(100, 50, 0), UsageError);
    CHECK_THROWS_AS(make_schedule(100, 95, 10), UsageError);  // blocks would be empty
  }

  TEST_CASE("pseudo-posterior composes previous q with the window likelihood") {
    const std::vector<double> y = sim_series(120, 31);
    Eigen::VectorXd mu(3);
    mu << -2.0, 2.5, -1.0;
    VariationalState prev = make_state(mu, 0.3, Factorization::Covariance, DiagParam::Free);
    prev.chol(2, 0) = 0.1;

    const UvbPseudoPosterior target(y, InnovationKind::Gaussian, prev, 80, 120);
    Eigen::VectorXd theta(3);
    theta << -2.2, 2.8, -1.3;
    const std::vector<double> head(y.begin(), y.begin() + 120);
    const double expected =
        log_q(theta, prev) + log_likelihood(theta, head, InnovationKind::Gaussian, 80);
    CHECK(target.log_density(theta) == doctest::Approx(expected).epsilon(1e-14));

    Eigen::VectorXd grad;
    const double v = target.log_density_grad(theta, grad);
    CHECK(v == doctest::Approx(expected).epsilon(1e-14));
    const Eigen::VectorXd expected_grad =
        grad_log_q_theta(theta, prev) +
        grad_log_likelihood(theta, head, InnovationKind::Gaussian, 80);
    CHECK((grad - expected_grad).cwiseAbs().maxCoeff() < 1e-12);

    // the window itself is what the composition truncates to
    const UvbPseudoPosterior shorter(y, InnovationKind::Gaussian, prev, 80, 100);
    const std::vector<double> head100(y.begin(), y.begin() + 100);
    CHECK(shorter.log_density(theta) ==
          doctest::Approx(log_q(theta, prev) +
                          log_likelihood(theta, head100, InnovationKind::Gaussian, 80))
              .epsilon(1e-14));
  }

  TEST_CASE("pseudo-posterior rejects malformed windows and states") {
    const std::vector<double> y = sim_series(50, 32);
    Eigen::VectorXd mu3 = Eigen::VectorXd::Zero(3);
    const VariationalState prev = make_state(mu3, 0.3, Factorization::Covariance, DiagParam::Free);
    CHECK_THROWS_AS(UvbPseudoPosterior(y, InnovationKind::Gaussian, prev, 40, 60),
                    DimensionMismatch);
    CHECK_THROWS_AS(UvbPseudoPosterior(y, InnovationKind::Gaussian, prev, 30, 30),
                    DimensionMismatch);
    CHECK_THROWS_AS(UvbPseudoPosterior(y, InnovationKind::Gaussian, prev, -1, 30),
                    DimensionMismatch);
    CHECK_THROWS_AS(UvbPseudoPosterior(y, InnovationKind::SkewT, prev, 30, 50),
                    DimensionMismatch);
  }

  TEST_CASE("streaming update tightens the approximation") {
    const std::vector<double> y = sim_series(600, 33);
    OptimizerConfig opt;
    opt.seed = 5;
    opt.max_iters = 2000;
    const FitResult initial = fit_svb(std::span<const double>(y).subspan(0, 300),
                                      InnovationKind::Gaussian, Method::Reparameterization, opt);
    const FitResult updated =
        uvb_update(y, InnovationKind::Gaussian, initial.state, 300, 600, opt);
    // doubling the data roughly doubles the curvature, so the fitted
    // covariance must shrink in volume
    CHECK(logdet_cov(updated.state) < logdet_cov(initial.state) - 0.5);
    CHECK_NOTHROW(updated.state.validate());
  }

  TEST_CASE("full refit accepts a warm start and rejects bad bounds") {
    const std::vector<double> y = sim_series(400, 34);
    OptimizerConfig opt;
    opt.seed = 6;
    opt.max_iters = 1200;
    const FitResult initial = fit_svb(std::span<const double>(y).subspan(0, 200),
                                      InnovationKind::Gaussian, Method::Reparameterization, opt);
    const FitResult refit = seqsvb_update(y, InnovationKind::Gaussian, initial.state, 400, opt);
    CHECK_NOTHROW(refit.state.validate());
    CHECK(logdet_cov(refit.state) < logdet_cov(initial.state));
    CHECK_THROWS_AS(seqsvb_update(y, InnovationKind::Gaussian, initial.state, 401, opt),
                    DimensionMismatch);
    CHECK_THROWS_AS(seqsvb_update(y, InnovationKind::Gaussian, initial.state, 1, opt),
                    DimensionMismatch);
  }

  TEST_CASE("scheduled run is deterministic and tracks the schedule") {
    const std::vector<double> y = sim_series(360, 35);
    SequentialConfig cfg;
    cfg.mode = SequentialMode::Uvb;
    cfg.initial = 240;
    cfg.updates = 3;
    cfg.opt.seed = 11;
    cfg.opt.max_iters = 150;

    const SequentialResult a = run_sequential(y, InnovationKind::Gaussian, cfg);
    const SequentialResult b = run_sequential(y, InnovationKind::Gaussian, cfg);
    REQUIRE(a.updates.size() == 3);
    CHECK(a.updates[0].upto == 280);
    CHECK(a.updates[1].upto == 320);
    CHECK(a.updates[2].upto == 360);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK((a.updates[j].fit.state.mu - b.updates[j].fit.state.mu).cwiseAbs().maxCoeff() == 0.0);
      CHECK(a.updates[j].fit.final_window_elbo == b.updates[j].fit.final_window_elbo);
    }

    // reusing the initial fit reproduces the updates exactly
    const SequentialResult c = run_sequential(y, InnovationKind::Gaussian, cfg, a.initial_fit);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK((a.updates[j].fit.state.mu - c.updates[j].fit.state.mu).cwiseAbs().maxCoeff() == 0.0);
      CHECK((a.updates[j].fit.state.chol - c.updates[j].fit.state.chol).cwiseAbs().maxCoeff() ==
            0.0);
    }

    // update seeds differ across steps: two updates over identical windows
    // from the same previous state would still use different draws
    CHECK(a.updates[0].fit.elbo_trace[0] != a.updates[1].fit.elbo_trace[0]);

    SequentialConfig seq_cfg = cfg;
    seq_cfg.mode = SequentialMode::SeqSvb;
    const SequentialResult d = run_sequential(y, InnovationKind::Gaussian, seq_cfg, a.initial_fit);
    REQUIRE(d.updates.size() == 3);
    CHECK(d.updates[2].upto == 360);
    CHECK_NOTHROW(d.updates[2].fit.state.validate());
  }

  TEST_CASE("mode names round-trip") {
    CHECK(sequential_mode_from_string("uvb") == SequentialMode::Uvb);
    CHECK(sequential_mode_from_string("seqsvb") == SequentialMode::SeqSvb);
    CHECK(sequential_mode_from_string("seq-svb") == SequentialMode::SeqSvb);
    CHECK(to_string(SequentialMode::Uvb) == "uvb");
    CHECK(to_string(SequentialMode::SeqSvb) == "seqsvb");
    CHECK_THROWS_AS(sequential_mode_from_string("online"), UsageError);
  }
}
