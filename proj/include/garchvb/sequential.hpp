#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "garchvb/svb.hpp"

namespace garchvb {

/// How a fitted approximation is carried forward when new data arrive.
///   Uvb:    fit against (new-window likelihood) x (previous q) -- fast,
///           compounds approximation error across updates.
///   SeqSvb: refit the full-data posterior warm-started at the previous q.
enum class SequentialMode { Uvb, SeqSvb };

/// Data windows for c updates after an initial fit on y[0..initial):
/// equal blocks of (total-initial)/c observations, the last one absorbing
/// the remainder.
struct UpdateSchedule {
  int initial = 0;
  std::vector<std::pair<int, int>> windows;  // [start, end) per update
};
UpdateSchedule make_schedule(int total, int initial, int updates);

struct SequentialConfig {
  SequentialMode mode = SequentialMode::Uvb;
  int initial = 0;  // observations in the initial batch fit
  int updates = 1;  // number of update steps covering the rest of the series
  OptimizerConfig opt;
};

struct UpdateRecord {
  int upto = 0;  // observations incorporated after this update
  FitResult fit;
};

struct SequentialResult {
  FitResult initial_fit;
  std::vector<UpdateRecord> updates;
};

/// One streaming update against the pseudo-posterior built from prev and the
/// window y[window_start..window_end); pathwise estimator.
FitResult uvb_update(std::span<const double> y, InnovationKind kind,
                     const VariationalState& prev, int window_start, int window_end,
                     const OptimizerConfig& cfg);

/// One full refit on y[0..upto), warm-started at prev; pathwise estimator.
FitResult seqsvb_update(std::span<const double> y, InnovationKind kind,
                        const VariationalState& prev, int upto, const OptimizerConfig& cfg);

/// Initial batch fit plus the scheduled updates. A precomputed initial fit can
/// be supplied so that several schedules (different modes or update counts)
/// share the same starting approximation; it must come from the same series
/// prefix and optimizer settings for the comparison to be meaningful.
/// Update seeds are derived from opt.seed via sub-streams, one per update.
SequentialResult run_sequential(std::span<const double> y, InnovationKind kind,
                                const SequentialConfig& cfg,
                                const std::optional<FitResult>& shared_initial = std::nullopt);

std::string to_string(SequentialMode mode);
SequentialMode sequential_mode_from_string(const std::string& name);

}  // namespace garchvb
