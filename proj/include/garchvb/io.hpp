#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "garchvb/svb.hpp"

namespace garchvb {

struct LoadOptions {
  bool prices = false;         // input column holds price levels, not returns
  bool scale_percent = true;   // returns computed as 100 * diff(log price)
};

struct ReturnSeries {
  std::vector<double> values;
  bool from_prices = false;
};

/// Reads a one-column CSV. An optional single header line (any non-numeric
/// label) is skipped; every later row must parse as a number or a ParseError
/// naming the 1-based row is thrown. With prices=true, the n levels are
/// turned into n-1 log returns.
ReturnSeries load_returns(const std::string& path, const LoadOptions& opt = {});

void save_returns_csv(const std::string& path, std::span<const double> values);

/// Matrix CSV with a mandatory header of column names.
void save_samples_csv(const std::string& path, const Eigen::MatrixXd& values,
                      const std::vector<std::string>& names);
Eigen::MatrixXd load_samples_csv(const std::string& path,
                                 std::vector<std::string>* names = nullptr);

/// A fitted approximation on disk: everything needed to draw from q or to
/// warm-start another fit. Deliberately excludes wall-clock timing so that
/// re-running a configuration reproduces the file byte for byte.
struct FitDocument {
  int schema_version = 1;
  InnovationKind kind = InnovationKind::Gaussian;
  Method method = Method::ControlVariates;
  std::uint64_t seed = 0;
  VariationalState state;
  std::vector<double> elbo_trace;
  int iterations = 0;
  StopReason stopped_by = StopReason::MaxIterations;
  double final_window_elbo = 0.0;
};

FitDocument make_fit_document(const FitResult& fit, InnovationKind kind, Method method,
                              std::uint64_t seed);
void save_fit_document(const std::string& path, const FitDocument& doc);
FitDocument load_fit_document(const std::string& path);

std::string to_string(StopReason reason);
std::string to_string(Factorization f);
std::string to_string(DiagParam p);

}  // namespace garchvb
