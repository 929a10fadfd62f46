#pragma once

#include <cstdint>
#include <random>

namespace garchvb {

/// splitmix64 mixing step, used to derive decorrelated sub-stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Reproducible random source: std::mt19937_64 plus hand-rolled distribution
/// transforms. The standard <random> distributions are implementation-defined,
/// so a seed would not produce the same stream on every toolchain; everything
/// downstream of the raw generator is implemented here instead.
///
/// Stream splitting: sub-streams are seeded with
///   splitmix64(seed ^ (0x9E3779B97F4A7C15 * (stream_index + 1)))
/// so that (seed, stream_index) pairs give independent, reproducible streams
/// (one per replicate cell, sequential update, MCMC chain, ...).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  static Rng stream(std::uint64_t seed, std::uint64_t stream_index);

  std::uint64_t raw() { return gen_(); }

  /// Uniform on the open interval (0,1); consumes one raw draw.
  double uniform();

  /// Standard normal via Wichura's inverse-CDF (AS 241, double precision);
  /// consumes exactly one uniform.
  double normal();

  /// Gamma(shape, 1), shape > 0, Marsaglia-Tsang squeeze method.
  double gamma(double shape);

  double chi_square(double dof) { return 2.0 * gamma(0.5 * dof); }

  /// Student t with dof > 0 degrees of freedom (variance dof/(dof-2)).
  double student_t(double dof);

 private:
  std::mt19937_64 gen_;
};

/// Inverse standard normal CDF (AS 241); exposed for tests.
double inverse_normal_cdf(double p);

}  // namespace garchvb
