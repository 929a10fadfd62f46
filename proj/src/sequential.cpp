#include "garchvb/sequential.hpp"

#include "garchvb/errors.hpp"

namespace garchvb {

UpdateSchedule make_schedule(int total, int initial, int updates) {
  if (initial < 2 || initial >= total) throw UsageError("initial batch must lie inside the series");
  if (updates < 1) throw UsageError("need at least one update");
  const int rest = total - initial;
  const int block = rest / updates;
  if (block < 1) throw UsageError("more updates than remaining observations");
  UpdateSchedule sched;
  sched.initial = initial;
  sched.windows.reserve(updates);
  for (int j = 0; j < updates; ++j) {
    const int start = initial + j * block;
    const int end = j + 1 == updates ? total : start + block;
    sched.windows.emplace_back(start, end);
  }
  return sched;
}

FitResult uvb_update(std::span<const double> y, InnovationKind kind,
                     const VariationalState& prev, int window_start, int window_end,
                     const OptimizerConfig& cfg) {
  UvbPseudoPosterior target(std::vector<double>(y.begin(), y.end()), kind, prev, window_start,
                            window_end);
  return fit_svb(target, Method::Reparameterization, cfg, prev);
}

FitResult seqsvb_update(std::span<const double> y, InnovationKind kind,
                        const VariationalState& prev, int upto, const OptimizerConfig& cfg) {
  if (upto < 2 || upto > static_cast<int>(y.size()))
    throw DimensionMismatch("upto outside the observed series");
  GarchPosterior target(std::vector<double>(y.begin(), y.begin() + upto), kind);
  return fit_svb(target, Method::Reparameterization, cfg, prev);
}

SequentialResult run_sequential(std::span<const double> y, InnovationKind kind,
                                const SequentialConfig& cfg,
                                const std::optional<FitResult>& shared_initial) {
  const UpdateSchedule sched =
      make_schedule(static_cast<int>(y.size()), cfg.initial, cfg.updates);
  SequentialResult result;
  if (shared_initial) {
    result.initial_fit = *shared_initial;
  } else {
    result.initial_fit = fit_svb(y.subspan(0, cfg.initial), kind, Method::Reparameterization,
                                 cfg.opt, std::nullopt);
  }
  const VariationalState* prev = &result.initial_fit.state;
  for (std::size_t j = 0; j < sched.windows.size(); ++j) {
    const auto [start, end] = sched.windows[j];
    OptimizerConfig step_cfg = cfg.opt;
    step_cfg.seed = splitmix64(cfg.opt.seed ^ (0x9E3779B97F4A7C15ULL * (j + 1)));
    UpdateRecord rec;
    rec.upto = end;
    rec.fit = cfg.mode == SequentialMode::Uvb
                  ? uvb_update(y, kind, *prev, start, end, step_cfg)
                  : seqsvb_update(y, kind, *prev, end, step_cfg);
    result.updates.push_back(std::move(rec));
    prev = &result.updates.back().fit.state;
  }
  return result;
}

std::string to_string(SequentialMode mode) {
  return mode == SequentialMode::Uvb ? "uvb" : "seqsvb";
}

SequentialMode sequential_mode_from_string(const std::string& name) {
  if (name == "uvb") return SequentialMode::Uvb;
  if (name == "seqsvb" || name == "seq-svb") return SequentialMode::SeqSvb;
  throw UsageError("unknown sequential mode '" + name + "' (expected uvb or seqsvb)");
}

}  // namespace garchvb
