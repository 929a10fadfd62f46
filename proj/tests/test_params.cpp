#include <doctest.h>

#include <cmath>

#include "garchvb/errors.hpp"
#include "garchvb/math_utils.hpp"
#include "garchvb/numdiff.hpp"
#include "garchvb/params.hpp"
#include "garchvb/rng.hpp"

using namespace garchvb;

namespace {

GarchParams random_params(InnovationKind kind, Rng& rng) {
  GarchParams p;
  p.omega = 0.01 + 2.0 * rng.uniform();
  const double psi1 = 0.05 + 0.9 * rng.uniform();
  const double psi2 = 0.05 + 0.9 * rng.uniform();
  p.alpha = psi1 * psi2;
  p.beta = psi1 * (1.0 - psi2);
  if (kind != InnovationKind::Gaussian) p.nu = 2.1 + 20.0 * rng.uniform();
  if (kind == InnovationKind::SkewT) p.xi = 0.2 + 2.0 * rng.uniform();
  return p;
}

const InnovationKind kKinds[] = {InnovationKind::Gaussian, InnovationKind::StudentT,
                                 InnovationKind::SkewT};

}  // namespace

TEST_SUITE("params") {
  TEST_CASE("counts and names") {
    CHECK(param_count(InnovationKind::Gaussian) == 3);
    CHECK(param_count(InnovationKind::StudentT) == 4);
    CHECK(param_count(InnovationKind::SkewT) == 5);
    CHECK(param_names(InnovationKind::SkewT) ==
          std::vector<std::string>{"omega", "alpha", "beta", "nu", "xi"});
    CHECK(innovation_kind_from_string("skewt") == InnovationKind::SkewT);
    CHECK(innovation_kind_from_string("t") == InnovationKind::StudentT);
    CHECK(to_string(InnovationKind::Gaussian) == "gaussian");
    CHECK_THROWS_AS(innovation_kind_from_string("cauchy"), UsageError);
  }

  TEST_CASE("validate rejects bad parameters") {
    GarchParams p{0.1, 0.2, 0.75, {}, {}};
    CHECK_NOTHROW(p.validate(InnovationKind::Gaussian));
    CHECK_THROWS_AS((GarchParams{-0.1, 0.2, 0.7, {}, {}}.validate(InnovationKind::Gaussian)),
                    ConstraintViolation);
    CHECK_THROWS_AS((GarchParams{0.1, 0.5, 0.5, {}, {}}.validate(InnovationKind::Gaussian)),
                    ConstraintViolation);
    CHECK_THROWS_AS((GarchParams{0.1, 0.2, 0.7, {}, {}}.validate(InnovationKind::StudentT)),
                    ConstraintViolation);  // nu missing
    CHECK_THROWS_AS((GarchParams{0.1, 0.2, 0.7, 2.0, {}}.validate(InnovationKind::StudentT)),
                    ConstraintViolation);  // nu must exceed 2
    CHECK_THROWS_AS((GarchParams{0.1, 0.2, 0.7, 4.0, -1.0}.validate(InnovationKind::SkewT)),
                    ConstraintViolation);
  }

  TEST_CASE("unconstrained map hits known coordinates") {
    GarchParams p{0.1, 0.2, 0.75, 4.0, 0.8};
    const Eigen::VectorXd theta = to_unconstrained(p, InnovationKind::SkewT);
    // log(0.1), logit(0.95), logit(0.2/0.95), inv_softplus(2), inv_softplus(0.8)
    CHECK(theta[0] == doctest::Approx(-2.3025850929940455).epsilon(1e-14));
    CHECK(theta[1] == doctest::Approx(2.9444389791664403).epsilon(1e-13));
    CHECK(theta[2] == doctest::Approx(-1.3217558399823195).epsilon(1e-13));
    CHECK(theta[3] == doctest::Approx(1.854586542131141).epsilon(1e-13));
    CHECK(theta[4] == doctest::Approx(inv_softplus(0.8)).epsilon(1e-14));
  }

  TEST_CASE("round-trip over random parameters") {
    Rng rng(20240501);
    for (InnovationKind kind : kKinds) {
      for (int i = 0; i < 1000; ++i) {
        const GarchParams p = random_params(kind, rng);
        const Eigen::VectorXd theta = to_unconstrained(p, kind);
        const GarchParams back = to_constrained(theta, kind);
        CHECK(back.omega == doctest::Approx(p.omega).epsilon(1e-12));
        CHECK(back.alpha == doctest::Approx(p.alpha).epsilon(1e-12));
        CHECK(back.beta == doctest::Approx(p.beta).epsilon(1e-12));
        if (p.nu) CHECK(*back.nu == doctest::Approx(*p.nu).epsilon(1e-10));
        if (p.xi) CHECK(*back.xi == doctest::Approx(*p.xi).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("extreme theta still lands strictly inside the region") {
    for (double v : {-30.0, 30.0}) {
      Eigen::VectorXd theta = Eigen::VectorXd::Constant(5, v);
      const GarchParams p = to_constrained(theta, InnovationKind::SkewT);
      CHECK(p.omega > 0.0);
      CHECK(p.alpha > 0.0);
      CHECK(p.beta >= 0.0);
      CHECK(p.alpha + p.beta < 1.0);
      CHECK(*p.nu > 2.0);
      CHECK(*p.xi > 0.0);
      CHECK_NOTHROW(p.validate(InnovationKind::SkewT));
    }
  }

  TEST_CASE("log prior at the origin") {
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(5);
    // omega term: -0 - exp(0) = -1
    CHECK(log_prior(theta.head(3), InnovationKind::Gaussian) ==
          doctest::Approx(-1.0 - 2.0 * 1.3862943611198906).epsilon(1e-13));
    // adding the nu term appends one more standard logistic at 0
    CHECK(log_prior(theta.head(4), InnovationKind::StudentT) ==
          doctest::Approx(-1.0 - 3.0 * 1.3862943611198906).epsilon(1e-13));
    // xi term at 0: -2 log log2 - 1/log2 - log 2
    CHECK(log_prior(theta, InnovationKind::SkewT) ==
          doctest::Approx(-1.0 - 3.0 * 1.3862943611198906 - 1.40281638028558).epsilon(1e-12));
  }

  TEST_CASE("prior gradient matches finite differences") {
    Rng rng(77);
    for (InnovationKind kind : kKinds) {
      const int d = param_count(kind);
      for (int i = 0; i < 50; ++i) {
        Eigen::VectorXd theta(d);
        for (int k = 0; k < d; ++k) theta[k] = 6.0 * rng.uniform() - 3.0;
        const Eigen::VectorXd g = grad_log_prior(theta, kind);
        const Eigen::VectorXd fd =
            fd_gradient([&](const Eigen::VectorXd& t) { return log_prior(t, kind); }, theta);
        for (int k = 0; k < d; ++k) {
          const double scale = std::max(1.0, std::fabs(fd[k]));
          CHECK(std::fabs(g[k] - fd[k]) / scale < 1e-6);
        }
      }
    }
  }

  TEST_CASE("prior density integrates to one in each coordinate") {
    // The prior factorizes across coordinates, so varying one coordinate with
    // the rest at 0 isolates that coordinate's term (up to the value of the
    // others at 0, which cancels). Trapezoid over a wide grid.
    // theta = tan(u) maps the whole line onto (-pi/2, pi/2); the xi term has
    // a theta^-2 tail (inverse-gamma through softplus), which the sec^2
    // Jacobian turns into a bounded integrand. Simpson in u.
    const Eigen::VectorXd origin = Eigen::VectorXd::Zero(5);
    const double at_origin = log_prior(origin, InnovationKind::SkewT);
    const auto marginal_mass = [&](int coord, double term_at_zero) {
      const int n = 200001;  // odd
      const double lo = -1.5707963, hi = 1.5707963, hstep = (hi - lo) / (n - 1);
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        const double u = lo + i * hstep;
        const double tu = std::tan(u);
        Eigen::VectorXd t = origin;
        t[coord] = tu;
        const double w =
            std::exp(log_prior(t, InnovationKind::SkewT) - at_origin) * (1.0 + tu * tu);
        total += (i == 0 || i == n - 1 ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0)) * w;
      }
      return total * hstep / 3.0 * std::exp(term_at_zero);
    };
    // term values at 0: omega -1, each logistic -2 log 2, xi -1.40281638...
    CHECK(marginal_mass(0, -1.0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(marginal_mass(1, -2.0 * std::log(2.0)) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(marginal_mass(3, -2.0 * std::log(2.0)) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(marginal_mass(4, -1.40281638028558) == doctest::Approx(1.0).epsilon(1e-6));
  }
}
