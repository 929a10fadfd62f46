#pragma once

#include <cstdint>
#include <vector>

#include "garchvb/params.hpp"
#include "garchvb/rng.hpp"

namespace garchvb {

/// One innovation draw with zero mean and unit variance. nu/xi are read only
/// by the kinds that use them. Skewed draws use the two-piece construction:
/// flip a |t| draw positive with probability xi^2/(1+xi^2) (scaling by xi) or
/// negative (scaling by 1/xi), then standardize with the (m, s) constants.
double sample_innovation(InnovationKind kind, double nu, double xi, Rng& rng);

struct SimConfig {
  GarchParams params;
  InnovationKind kind = InnovationKind::Gaussian;
  int length = 0;
  std::uint64_t seed = 1;
};

/// Simulated series y[0..length), with the variance recursion started at the
/// unconditional variance omega/(1-alpha-beta).
std::vector<double> simulate_garch(const SimConfig& cfg);

}  // namespace garchvb
