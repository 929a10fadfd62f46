#include "garchvb/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "garchvb/errors.hpp"

namespace garchvb {

namespace {

// Linear-interpolation quantile on a sorted vector.
double quantile_sorted(const std::vector<double>& x, double p) {
  const double pos = p * (x.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= x.size()) return x.back();
  const double frac = pos - lo;
  return x[lo] + frac * (x[lo + 1] - x[lo]);
}

std::vector<double> sorted_copy(std::span<const double> samples) {
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  return x;
}

}  // namespace

double silverman_bandwidth(std::span<const double> samples) {
  const auto n = samples.size();
  if (n < 2) throw InsufficientSamples("bandwidth needs at least 2 samples");
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1));
  if (!(sd > 0.0)) throw DegenerateSeries("all samples equal");
  const std::vector<double> x = sorted_copy(samples);
  const double iqr = quantile_sorted(x, 0.75) - quantile_sorted(x, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

std::vector<double> kde_at(std::span<const double> samples, std::span<const double> grid,
                           double bandwidth) {
  if (samples.size() < 2) throw InsufficientSamples("kde needs at least 2 samples");
  if (!(bandwidth > 0.0)) throw ConstraintViolation("bandwidth must be positive");
  const std::vector<double> x = sorted_copy(samples);
  const double h = bandwidth;
  const double norm = 1.0 / (samples.size() * h * std::sqrt(2.0 * std::numbers::pi));
  // Contributions beyond 8 bandwidths are below 1e-14 of the peak; skip them.
  const double cutoff = 8.0 * h;
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double g = grid[i];
    const auto lo = std::lower_bound(x.begin(), x.end(), g - cutoff);
    const auto hi = std::upper_bound(lo, x.end(), g + cutoff);
    double acc = 0.0;
    for (auto it = lo; it != hi; ++it) {
      const double z = (g - *it) / h;
      acc += std::exp(-0.5 * z * z);
    }
    f[i] = norm * acc;
  }
  return f;
}

DensityGrid kde(std::span<const double> samples, int grid_points) {
  if (grid_points < 2) throw UsageError("need at least 2 grid points");
  const double h = silverman_bandwidth(samples);
  const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *mn - 3.0 * h;
  const double hi = *mx + 3.0 * h;
  DensityGrid out;
  out.x.resize(grid_points);
  const double dx = (hi - lo) / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i) out.x[i] = lo + i * dx;
  out.density = kde_at(samples, out.x, h);
  return out;
}

double accuracy(std::span<const double> q_samples, std::span<const double> p_samples,
                int grid_points) {
  if (grid_points < 2) throw UsageError("need at least 2 grid points");
  const double hq = silverman_bandwidth(q_samples);
  const double hp = silverman_bandwidth(p_samples);
  const auto [qmn, qmx] = std::minmax_element(q_samples.begin(), q_samples.end());
  const auto [pmn, pmx] = std::minmax_element(p_samples.begin(), p_samples.end());
  const double lo = std::min(*qmn - 3.0 * hq, *pmn - 3.0 * hp);
  const double hi = std::max(*qmx + 3.0 * hq, *pmx + 3.0 * hp);
  std::vector<double> grid(grid_points);
  const double dx = (hi - lo) / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i) grid[i] = lo + i * dx;
  const std::vector<double> fq = kde_at(q_samples, grid, hq);
  const std::vector<double> fp = kde_at(p_samples, grid, hp);
  double integral = 0.0;
  for (int i = 0; i + 1 < grid_points; ++i) {
    const double a = std::fabs(fq[i] - fp[i]);
    const double b = std::fabs(fq[i + 1] - fp[i + 1]);
    integral += 0.5 * (a + b) * dx;
  }
  const double score = 100.0 * (1.0 - 0.5 * integral);
  return std::clamp(score, 0.0, 100.0);
}

InformationCriteria aic_bic(double max_log_lik, int k, int T) {
  if (k < 1 || T < 1) throw UsageError("k and T must be positive");
  if (!std::isfinite(max_log_lik)) throw NonFiniteError("log-likelihood must be finite");
  return {2.0 * k - 2.0 * max_log_lik, k * std::log(static_cast<double>(T)) - 2.0 * max_log_lik};
}

SummaryStats summary_stats(std::span<const double> y) {
  if (y.empty()) throw InsufficientSamples("summary of an empty series");
  const std::vector<double> x = sorted_copy(y);
  const auto n = static_cast<double>(y.size());
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : y) {
    const double c = v - mean;
    m2 += c * c;
    m3 += c * c * c;
    m4 += c * c * c * c;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  SummaryStats s;
  s.min = x.front();
  s.max = x.back();
  s.mean = mean;
  s.median = quantile_sorted(x, 0.5);
  if (m2 > 0.0) {
    s.skewness = m3 / std::pow(m2, 1.5);
    s.kurtosis = m4 / (m2 * m2);
  } else {
    s.skewness = std::numeric_limits<double>::quiet_NaN();
    s.kurtosis = std::numeric_limits<double>::quiet_NaN();
  }
  return s;
}

}  // namespace garchvb
