#include <doctest.h>

#include <cmath>
#include <vector>

#include "garchvb/errors.hpp"
#include "garchvb/garch_model.hpp"
#include "garchvb/rng.hpp"
#include "garchvb/simulate.hpp"

using namespace garchvb;

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
  double skew = 0.0;
};

Moments moments(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  Moments m;
  for (double v : x) m.mean += v;
  m.mean /= n;
  double m2 = 0.0, m3 = 0.0;
  for (double v : x) {
    const double c = v - m.mean;
    m2 += c * c;
    m3 += c * c * c;
  }
  m.var = m2 / (n - 1.0);
  m.skew = (m3 / n) / std::pow(m2 / n, 1.5);
  return m;
}

std::vector<double> draw_innovations(InnovationKind kind, double nu, double xi, int n,
                                     std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = sample_innovation(kind, nu, xi, rng);
  return x;
}

double frac_below(const std::vector<double>& x, double c) {
  long k = 0;
  for (double v : x) k += v < c;
  return static_cast<double>(k) / x.size();
}

}  // namespace

TEST_SUITE("simulate") {
  TEST_CASE("gaussian innovations are standardized") {
    const auto x = draw_innovations(InnovationKind::Gaussian, 0.0, 0.0, 1000000, 21);
    const Moments m = moments(x);
    CHECK(std::fabs(m.mean) < 0.004);
    CHECK(m.var == doctest::Approx(1.0).epsilon(0.01));
    CHECK(std::fabs(m.skew) < 0.01);
  }

  TEST_CASE("t innovations are standardized with the right tails") {
    const auto x6 = draw_innovations(InnovationKind::StudentT, 6.0, 0.0, 1000000, 22);
    const Moments m6 = moments(x6);
    CHECK(std::fabs(m6.mean) < 0.005);
    CHECK(m6.var == doctest::Approx(1.0).epsilon(0.02));
    CHECK(frac_below(x6, -1.0) == doctest::Approx(0.1332848516900345).epsilon(0.015));
    CHECK(frac_below(x6, -2.0) == doctest::Approx(0.024912631390288376).epsilon(0.03));

    // nu = 4 has no fourth moment, so check the distribution through tail
    // frequencies rather than the variance of the sample variance
    const auto x4 = draw_innovations(InnovationKind::StudentT, 4.0, 0.0, 1000000, 23);
    CHECK(std::fabs(moments(x4).mean) < 0.01);
    CHECK(frac_below(x4, -1.0) == doctest::Approx(0.11509982054024936).epsilon(0.015));
    CHECK(frac_below(x4, -2.0) == doctest::Approx(0.023710327792159785).epsilon(0.03));

    Rng rng(1);
    CHECK_THROWS_AS(sample_innovation(InnovationKind::StudentT, 2.0, 0.0, rng),
                    ConstraintViolation);
  }

  TEST_CASE("skewed innovations are standardized with the right asymmetry") {
    const double nu = 6.0, xi = 0.8;
    const auto x = draw_innovations(InnovationKind::SkewT, nu, xi, 1000000, 24);
    const Moments m = moments(x);
    CHECK(std::fabs(m.mean) < 0.005);
    CHECK(m.var == doctest::Approx(1.0).epsilon(0.02));
    CHECK(m.skew < -0.15);  // xi < 1 puts the long tail on the left

    // the two-piece construction flips positive with probability
    // xi^2/(1+xi^2); in standardized units the pieces meet at -m/s
    const SkewTConstants c = skewt_constants(nu, xi);
    CHECK(1.0 - frac_below(x, -c.m / c.s) ==
          doctest::Approx(0.3902439024390244).epsilon(0.01));

    const auto xr = draw_innovations(InnovationKind::SkewT, nu, 1.25, 1000000, 25);
    CHECK(moments(xr).skew > 0.15);

    Rng rng(1);
    CHECK_THROWS_AS(sample_innovation(InnovationKind::SkewT, nu, 0.0, rng),
                    ConstraintViolation);
    CHECK_THROWS_AS(sample_innovation(InnovationKind::SkewT, 1.5, xi, rng),
                    ConstraintViolation);
  }

  TEST_CASE("constant-variance limit gives iid draws") {
    SimConfig cfg;
    cfg.params = GarchParams{1.0, 1e-9, 1e-9, {}, {}};  // feedback shut off
    cfg.kind = InnovationKind::Gaussian;
    cfg.length = 200000;
    cfg.seed = 26;
    const std::vector<double> y = simulate_garch(cfg);
    REQUIRE(y.size() == 200000u);
    const Moments m = moments(y);
    CHECK(std::fabs(m.mean) < 0.01);
    CHECK(m.var == doctest::Approx(1.0).epsilon(0.02));
  }

  TEST_CASE("simulated series matches the unconditional variance") {
    SimConfig cfg;
    cfg.params = GarchParams{0.1, 0.2, 0.75, {}, {}};
    cfg.kind = InnovationKind::Gaussian;
    cfg.length = 1000000;
    cfg.seed = 27;
    const std::vector<double> y = simulate_garch(cfg);
    // omega/(1-alpha-beta) = 2; persistence inflates the sampling error
    CHECK(moments(y).var == doctest::Approx(2.0).epsilon(0.075));
    for (double v : y) REQUIRE(std::isfinite(v));

    // volatility clustering: squared values are positively autocorrelated
    double num = 0.0, den = 0.0, mean2 = moments(y).var;
    for (std::size_t t = 0; t + 1 < y.size(); ++t) {
      num += (y[t] * y[t] - mean2) * (y[t + 1] * y[t + 1] - mean2);
      den += (y[t] * y[t] - mean2) * (y[t] * y[t] - mean2);
    }
    CHECK(num / den > 0.2);
  }

  TEST_CASE("simulation is reproducible and validated") {
    SimConfig cfg;
    cfg.params = GarchParams{0.1, 0.2, 0.75, 4.0, 0.8};
    cfg.kind = InnovationKind::SkewT;
    cfg.length = 500;
    cfg.seed = 28;
    const std::vector<double> a = simulate_garch(cfg);
    const std::vector<double> b = simulate_garch(cfg);
    CHECK(a == b);
    cfg.seed = 29;
    const std::vector<double> c = simulate_garch(cfg);
    CHECK(a != c);

    cfg.length = 0;
    CHECK_THROWS_AS(simulate_garch(cfg), UsageError);
    cfg.length = 10;
    cfg.params.alpha = 0.9;  // alpha + beta >= 1
    CHECK_THROWS_AS(simulate_garch(cfg), ConstraintViolation);
    cfg.params = GarchParams{0.1, 0.2, 0.75, {}, {}};  // t kind needs nu
    cfg.kind = InnovationKind::StudentT;
    CHECK_THROWS_AS(simulate_garch(cfg), ConstraintViolation);
  }
}
