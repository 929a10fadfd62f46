#include "garchvb/simulate.hpp"

#include <cmath>

#include "garchvb/errors.hpp"
#include "garchvb/garch_model.hpp"

namespace garchvb {

double sample_innovation(InnovationKind kind, double nu, double xi, Rng& rng) {
  switch (kind) {
    case InnovationKind::Gaussian:
      return rng.normal();
    case InnovationKind::StudentT: {
      if (!(nu > 2.0)) throw ConstraintViolation("nu must exceed 2");
      return rng.student_t(nu) * std::sqrt((nu - 2.0) / nu);
    }
    case InnovationKind::SkewT: {
      if (!(nu > 2.0)) throw ConstraintViolation("nu must exceed 2");
      if (!(xi > 0.0)) throw ConstraintViolation("xi must be positive");
      const SkewTConstants c = skewt_constants(nu, xi);
      const double t = std::fabs(rng.student_t(nu) * std::sqrt((nu - 2.0) / nu));
      const double u = rng.uniform();
      const double w = u < xi * xi / (1.0 + xi * xi) ? xi * t : -t / xi;
      return (w - c.m) / c.s;
    }
  }
  throw UsageError("unknown innovation kind");
}

std::vector<double> simulate_garch(const SimConfig& cfg) {
  cfg.params.validate(cfg.kind);
  if (cfg.length < 1) throw UsageError("length must be positive");
  const double nu = cfg.params.nu.value_or(0.0);
  const double xi = cfg.params.xi.value_or(0.0);
  Rng rng(cfg.seed);
  std::vector<double> y(cfg.length);
  double sig2 = cfg.params.unconditional_variance();
  for (int t = 0; t < cfg.length; ++t) {
    y[t] = std::sqrt(sig2) * sample_innovation(cfg.kind, nu, xi, rng);
    sig2 = cfg.params.omega + cfg.params.alpha * y[t] * y[t] + cfg.params.beta * sig2;
  }
  return y;
}

}  // namespace garchvb
