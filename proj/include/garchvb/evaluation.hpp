#pragma once

#include <span>
#include <vector>

namespace garchvb {

/// Silverman's rule of thumb: 0.9 * min(sd, IQR/1.34) * n^(-1/5).
/// Falls back to sd alone when the IQR vanishes (heavily tied samples).
double silverman_bandwidth(std::span<const double> samples);

struct DensityGrid {
  std::vector<double> x;
  std::vector<double> density;
};

/// Gaussian kernel density estimate on an equally spaced grid spanning the
/// sample range extended by 3 bandwidths on each side.
DensityGrid kde(std::span<const double> samples, int grid_points = 512);

/// KDE evaluated on a caller-supplied grid with a given bandwidth.
std::vector<double> kde_at(std::span<const double> samples, std::span<const double> grid,
                           double bandwidth);

/// Overlap score 100 * (1 - 0.5 * integral |q_hat - p_hat|) between two
/// sample clouds, via KDEs on a shared 512-point grid covering both supports
/// (each extended by 3 of its own bandwidths); trapezoid rule, clipped to
/// [0, 100]. 100 means identical densities, 0 disjoint ones.
double accuracy(std::span<const double> q_samples, std::span<const double> p_samples,
                int grid_points = 512);

struct InformationCriteria {
  double aic;
  double bic;
};
/// AIC = 2k - 2 lnL, BIC = k ln(T) - 2 lnL.
InformationCriteria aic_bic(double max_log_lik, int k, int T);

struct SummaryStats {
  double min;
  double max;
  double mean;
  double median;
  double skewness;  // m3 / m2^(3/2), population moments
  double kurtosis;  // m4 / m2^2 (normal = 3)
};
SummaryStats summary_stats(std::span<const double> y);

}  // namespace garchvb
