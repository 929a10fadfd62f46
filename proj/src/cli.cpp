#include "garchvb/cli.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "garchvb/errors.hpp"
#include "garchvb/evaluation.hpp"
#include "garchvb/io.hpp"
#include "garchvb/mcmc.hpp"
#include "garchvb/parallel.hpp"
#include "garchvb/sequential.hpp"
#include "garchvb/simulate.hpp"
#include "garchvb/svb.hpp"

namespace garchvb {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kToolVersion = "garchvb 0.1.0";
constexpr const char* kOutDirEnv = "GARCHVB_OUT_DIR";

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Binds options to a CLI11 command and mirrors them into/out of JSON so that
/// every run can be replayed from its manifest: values from --config fill any
/// option not set on the command line (flags win on conflict), and the final
/// effective configuration is what the manifest records.
class ConfigBinder {
 public:
  explicit ConfigBinder(CLI::App* cmd) : cmd_(cmd) {
    cmd_->add_option("--config", config_path_,
                     "JSON config or manifest supplying defaults for unset options");
    cmd_->add_option("--out-dir", out_dir_,
                     "directory for outputs (default: $" + std::string(kOutDirEnv) + " or .)");
  }

  template <class T>
  CLI::Option* bind(const std::string& flag, T& value, const std::string& desc) {
    CLI::Option* opt = cmd_->add_option(flag, value, desc);
    register_sync(opt, value, key_of(flag));
    return opt;
  }

  CLI::Option* bind_flag(const std::string& flag, bool& value, const std::string& desc) {
    CLI::Option* opt = cmd_->add_flag(flag, value, desc);
    register_sync(opt, value, key_of(flag));
    return opt;
  }

  /// Applies --config (if any) and returns the effective config as JSON.
  json finalize(const std::string& command) {
    if (!config_path_.empty()) {
      std::ifstream in(config_path_);
      if (!in) throw UsageError("cannot open config '" + config_path_ + "'");
      json doc;
      try {
        in >> doc;
      } catch (const json::exception& e) {
        throw ParseError(config_path_ + ": " + e.what());
      }
      json cfg = doc;
      if (doc.contains("config")) {
        if (doc.contains("command") && doc.at("command").get<std::string>() != command)
          throw UsageError("manifest '" + config_path_ + "' belongs to command '" +
                           doc.at("command").get<std::string>() + "'");
        cfg = doc.at("config");
      }
      for (const auto& import : importers_) import(cfg);
      if (out_dir_.empty() && cfg.contains("out_dir"))
        out_dir_ = cfg.at("out_dir").get<std::string>();
    }
    if (out_dir_.empty()) {
      const char* env = std::getenv(kOutDirEnv);
      out_dir_ = env && *env ? env : ".";
    }
    json cfg;
    for (const auto& exp : exporters_) exp(cfg);
    cfg["out_dir"] = out_dir_;
    return cfg;
  }

  /// Resolves a (possibly relative) output path against the output directory.
  std::string out_path(const std::string& name) const {
    fs::path p(name);
    if (p.is_absolute()) return name;
    fs::create_directories(out_dir_);
    return (fs::path(out_dir_) / p).string();
  }

  void write_manifest(const std::string& command, const json& cfg,
                      const std::string& primary_output) const {
    const json manifest{{"schema_version", 1},
                        {"tool", kToolVersion},
                        {"command", command},
                        {"config", cfg}};
    std::ofstream out(primary_output + ".manifest.json");
    if (!out) throw UsageError("cannot write manifest next to '" + primary_output + "'");
    out << manifest.dump(2) << "\n";
  }

 private:
  static std::string key_of(const std::string& flag) {
    // last alias, e.g. "--max-iters" -> "max_iters"
    std::string last;
    std::string cur;
    for (char ch : flag + ",") {
      if (ch == ',') {
        if (!cur.empty()) last = cur;
        cur.clear();
      } else {
        cur += ch;
      }
    }
    std::string key;
    for (char ch : last)
      if (ch != '-') key += ch;
      else if (!key.empty()) key += '_';
    return key;
  }

  template <class T>
  void register_sync(CLI::Option* opt, T& value, const std::string& key) {
    importers_.push_back([opt, &value, key](const json& j) {
      if (opt->count() == 0 && j.contains(key)) value = j.at(key).get<T>();
    });
    exporters_.push_back([&value, key](json& j) { j[key] = value; });
  }

  CLI::App* cmd_;
  std::string config_path_;
  std::string out_dir_;
  std::vector<std::function<void(const json&)>> importers_;
  std::vector<std::function<void(json&)>> exporters_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t k) {
  return splitmix64(seed ^ (0x9E3779B97F4A7C15ULL * (k + 1)));
}

// Shared option bundles ------------------------------------------------------

struct InputOptions {
  std::string input;
  bool prices = false;
  bool scale_percent = true;

  void bind(ConfigBinder& b) {
    b.bind("--input", input, "one-column CSV of returns (or prices)")->required(false);
    b.bind_flag("--prices", prices, "input holds price levels; convert to log returns");
    b.bind_flag("--scale-percent,!--no-scale-percent", scale_percent,
                "multiply log returns by 100 when converting prices");
  }

  ReturnSeries load() const {
    if (input.empty()) throw UsageError("--input is required");
    return load_returns(input, {prices, scale_percent});
  }
};

struct OptimizerOptions {
  OptimizerConfig opt;

  void bind(ConfigBinder& b) {
    b.bind("--samples", opt.mc_samples, "Monte Carlo draws per gradient estimate");
    b.bind("--eta0", opt.eta0, "learning-rate ceiling");
    b.bind("--tau", opt.tau, "iterations before the 1/t learning-rate decay");
    b.bind("--beta1", opt.beta1, "first-moment smoothing");
    b.bind("--beta2", opt.beta2, "second-moment smoothing");
    b.bind("--window", opt.window, "stopping-rule smoothing window");
    b.bind("--patience", opt.patience, "iterations without improvement before stopping");
    b.bind("--max-iters", opt.max_iters, "iteration cap");
    b.bind("--seed", opt.seed, "random seed");
  }
};

struct TruthOptions {
  double omega = 0.1, alpha = 0.2, beta = 0.75, nu = 4.0, xi = 0.8;

  void bind(ConfigBinder& b) {
    b.bind("--omega", omega, "true omega");
    b.bind("--alpha", alpha, "true alpha");
    b.bind("--beta", beta, "true beta");
    b.bind("--nu", nu, "true degrees of freedom (t, skewt)");
    b.bind("--xi", xi, "true skewness (skewt)");
  }

  GarchParams params(InnovationKind kind) const {
    GarchParams p;
    p.omega = omega;
    p.alpha = alpha;
    p.beta = beta;
    if (kind != InnovationKind::Gaussian) p.nu = nu;
    if (kind == InnovationKind::SkewT) p.xi = xi;
    return p;
  }
};

// Per-parameter accuracy table between a fitted q and reference draws.
std::vector<std::pair<std::string, double>> accuracy_table(const Eigen::MatrixXd& q_draws,
                                                           const Eigen::MatrixXd& p_draws,
                                                           const std::vector<std::string>& names) {
  std::vector<std::pair<std::string, double>> rows;
  for (std::size_t j = 0; j < names.size(); ++j) {
    std::vector<double> q(q_draws.col(j).begin(), q_draws.col(j).end());
    std::vector<double> p(p_draws.col(j).begin(), p_draws.col(j).end());
    rows.emplace_back(names[j], accuracy(q, p));
  }
  return rows;
}

// Subcommands ----------------------------------------------------------------

int cmd_simulate(ConfigBinder& b, const std::string& model, const TruthOptions& truth,
                 int length, std::uint64_t seed, const std::string& out, const json& cfg) {
  const InnovationKind kind = innovation_kind_from_string(model);
  SimConfig sim;
  sim.params = truth.params(kind);
  sim.kind = kind;
  sim.length = length;
  sim.seed = seed;
  const std::vector<double> y = simulate_garch(sim);
  const std::string path = b.out_path(out);
  save_returns_csv(path, y);
  b.write_manifest("simulate", cfg, path);
  std::printf("simulate: wrote %d observations to %s\n", length, path.c_str());
  return 0;
}

int cmd_fit(ConfigBinder& b, const InputOptions& in, const std::string& model,
            const std::string& method_name, const OptimizerOptions& oo, const std::string& init,
            const std::string& out, const json& cfg) {
  const InnovationKind kind = innovation_kind_from_string(model);
  const Method method = method_from_string(method_name);
  const ReturnSeries series = in.load();
  std::optional<VariationalState> start;
  if (!init.empty()) {
    const FitDocument prev = load_fit_document(init);
    if (prev.kind != kind) throw UsageError("--init document was fitted with another model");
    start = prev.state;
  }
  const FitResult fit = fit_svb(series.values, kind, method, oo.opt, start);
  const std::string path = b.out_path(out);
  save_fit_document(path, make_fit_document(fit, kind, method, oo.opt.seed));
  b.write_manifest("fit", cfg, path);
  std::printf("fit: %s/%s T=%zu iterations=%d stopped_by=%s elbo=%.4f (%.2fs) -> %s\n",
              model.c_str(), method_name.c_str(), series.values.size(), fit.iterations,
              to_string(fit.stopped_by).c_str(), fit.final_window_elbo, fit.wall_seconds,
              path.c_str());
  return 0;
}

int cmd_mcmc(ConfigBinder& b, const InputOptions& in, const std::string& model,
             const McmcConfig& mc, const std::string& out, const json& cfg) {
  const InnovationKind kind = innovation_kind_from_string(model);
  const ReturnSeries series = in.load();
  const PosteriorSamples samples = rwmh(series.values, kind, mc);
  const std::string path = b.out_path(out);
  save_samples_csv(path, samples.draws, samples.names);
  const ChainDiagnostics diag = chain_diagnostics(samples.draws);
  json meta{{"acceptance_rate", samples.acceptance_rate},
            {"fallback_proposal", samples.fallback_proposal},
            {"mle_log_lik", samples.mode.log_lik},
            {"mle_converged", samples.mode.converged},
            {"ess", std::vector<double>(diag.ess.begin(), diag.ess.end())},
            {"split_rhat", std::vector<double>(diag.split_rhat.begin(), diag.split_rhat.end())}};
  {
    std::ofstream meta_out(path + ".meta.json");
    if (!meta_out) throw UsageError("cannot write '" + path + ".meta.json'");
    meta_out << meta.dump(2) << "\n";
  }
  b.write_manifest("mcmc", cfg, path);
  std::printf("mcmc: %s T=%zu draws=%lld acceptance=%.3f min_ess=%.0f -> %s\n", model.c_str(),
              series.values.size(), static_cast<long long>(samples.draws.rows()),
              samples.acceptance_rate, diag.ess.minCoeff(), path.c_str());
  if (samples.fallback_proposal)
    std::printf("mcmc: warning: curvature unusable, proposal fell back to 0.01*I\n");
  return 0;
}

int cmd_accuracy(ConfigBinder& b, const std::string& fit_path, const std::string& mcmc_path,
                 const std::string& csv_a, const std::string& csv_b, int draws,
                 std::uint64_t seed, const std::string& out, const json& cfg) {
  Eigen::MatrixXd q, p;
  std::vector<std::string> names;
  if (!fit_path.empty()) {
    if (mcmc_path.empty()) throw UsageError("--mcmc is required with --fit");
    const FitDocument doc = load_fit_document(fit_path);
    std::vector<std::string> ref_names;
    p = load_samples_csv(mcmc_path, &ref_names);
    names = param_names(doc.kind);
    if (ref_names != names)
      throw UsageError("reference sample columns do not match the fitted model parameters");
    Rng rng(seed);
    q = constrained_draws(doc.state, doc.kind, draws, rng);
  } else {
    if (csv_a.empty() || csv_b.empty())
      throw UsageError("need either --fit/--mcmc or --csv-a/--csv-b");
    std::vector<std::string> names_b;
    q = load_samples_csv(csv_a, &names);
    p = load_samples_csv(csv_b, &names_b);
    if (names_b != names) throw UsageError("sample files have different columns");
  }
  const auto rows = accuracy_table(q, p, names);
  const std::string path = b.out_path(out);
  {
    std::ofstream table(path);
    if (!table) throw UsageError("cannot write '" + path + "'");
    table << "parameter,accuracy\n";
    for (const auto& [name, acc] : rows) table << name << "," << format_double(acc) << "\n";
  }
  b.write_manifest("accuracy", cfg, path);
  for (const auto& [name, acc] : rows) std::printf("accuracy[%s] = %.2f\n", name.c_str(), acc);
  return 0;
}

int cmd_sequential(ConfigBinder& b, const InputOptions& in, const std::string& model,
                   const std::string& mode_name, int initial, int updates,
                   const OptimizerOptions& oo, const std::string& out_prefix, const json& cfg) {
  const InnovationKind kind = innovation_kind_from_string(model);
  const ReturnSeries series = in.load();
  SequentialConfig sc;
  sc.mode = sequential_mode_from_string(mode_name);
  sc.initial = initial;
  sc.updates = updates;
  sc.opt = oo.opt;
  const SequentialResult result = run_sequential(series.values, kind, sc);

  const std::string prefix = b.out_path(out_prefix);
  save_fit_document(prefix + "_initial.json",
                    make_fit_document(result.initial_fit, kind, Method::Reparameterization,
                                      oo.opt.seed));
  std::ofstream summary(prefix + "_summary.csv");
  if (!summary) throw UsageError("cannot write '" + prefix + "_summary.csv'");
  summary << "update,upto,iterations,stopped_by,final_window_elbo\n";
  summary << "0," << initial << "," << result.initial_fit.iterations << ","
          << to_string(result.initial_fit.stopped_by) << ","
          << format_double(result.initial_fit.final_window_elbo) << "\n";
  double update_seconds = 0.0;
  for (std::size_t j = 0; j < result.updates.size(); ++j) {
    const UpdateRecord& rec = result.updates[j];
    char name[32];
    std::snprintf(name, sizeof(name), "_update%02zu.json", j + 1);
    save_fit_document(prefix + name, make_fit_document(rec.fit, kind,
                                                       Method::Reparameterization, oo.opt.seed));
    summary << (j + 1) << "," << rec.upto << "," << rec.fit.iterations << ","
            << to_string(rec.fit.stopped_by) << "," << format_double(rec.fit.final_window_elbo)
            << "\n";
    update_seconds += rec.fit.wall_seconds;
  }
  summary.close();
  b.write_manifest("sequential", cfg, prefix + "_summary.csv");
  std::printf("sequential: %s %s initial=%d updates=%d mean_update_seconds=%.2f -> %s_*\n",
              model.c_str(), mode_name.c_str(), initial, updates,
              update_seconds / std::max<std::size_t>(result.updates.size(), 1), prefix.c_str());
  return 0;
}

int cmd_ic(ConfigBinder& b, const InputOptions& in, const std::string& model,
           const std::string& out, const json& cfg) {
  const InnovationKind kind = innovation_kind_from_string(model);
  const ReturnSeries series = in.load();
  const MleResult fit = mle(series.values, kind);
  const int k = param_count(kind);
  const int T = static_cast<int>(series.values.size());
  const InformationCriteria ic = aic_bic(fit.log_lik, k, T);
  const std::string path = b.out_path(out);
  {
    std::ofstream table(path);
    if (!table) throw UsageError("cannot write '" + path + "'");
    table << "model,k,T,log_lik,aic,bic,converged\n";
    table << to_string(kind) << "," << k << "," << T << "," << format_double(fit.log_lik) << ","
          << format_double(ic.aic) << "," << format_double(ic.bic) << ","
          << (fit.converged ? "true" : "false") << "\n";
  }
  b.write_manifest("ic", cfg, path);
  std::printf("ic: %s lnL=%.2f AIC=%.2f BIC=%.2f%s\n", model.c_str(), fit.log_lik, ic.aic, ic.bic,
              fit.converged ? "" : " (maximizer did not reach tolerance)");
  return 0;
}

int cmd_density_grid(ConfigBinder& b, const std::string& input, const std::string& column,
                     int grid_points, const std::string& out, const json& cfg) {
  std::vector<std::string> names;
  const Eigen::MatrixXd samples = load_samples_csv(input, &names);
  std::size_t col = 0;
  if (!column.empty()) {
    for (col = 0; col < names.size(); ++col)
      if (names[col] == column) break;
    if (col == names.size()) throw UsageError("column '" + column + "' not in " + input);
  }
  std::vector<double> x(samples.col(col).begin(), samples.col(col).end());
  const DensityGrid grid = kde(x, grid_points);
  const std::string path = b.out_path(out);
  {
    std::ofstream table(path);
    if (!table) throw UsageError("cannot write '" + path + "'");
    table << "x,density\n";
    for (std::size_t i = 0; i < grid.x.size(); ++i)
      table << format_double(grid.x[i]) << "," << format_double(grid.density[i]) << "\n";
  }
  b.write_manifest("density-grid", cfg, path);
  std::printf("density-grid: %zu points over [%g, %g] -> %s\n", grid.x.size(), grid.x.front(),
              grid.x.back(), path.c_str());
  return 0;
}

int cmd_replicate(ConfigBinder& b, const std::string& model,
                  const std::vector<std::string>& methods, const std::vector<int>& samples_list,
                  int replicates, int length, const TruthOptions& truth, int mcmc_iterations,
                  int eval_draws, std::uint64_t seed, int threads, const std::string& out,
                  const json& cfg) {
  const InnovationKind kind = innovation_kind_from_string(model);
  if (methods.empty() || samples_list.empty())
    throw UsageError("need at least one method and one sample count");
  if (replicates < 1) throw UsageError("need at least one replicate");
  struct Cell {
    Method method;
    int s;
  };
  std::vector<Cell> cells;
  for (const auto& mname : methods)
    for (int s : samples_list) cells.push_back({method_from_string(mname), s});

  const std::vector<std::string>& names = param_names(kind);
  const int npar = param_count(kind);
  // accuracy[cell][replicate][param], seconds[cell][replicate]
  std::vector<std::vector<std::vector<double>>> acc(
      cells.size(), std::vector<std::vector<double>>(replicates, std::vector<double>(npar)));
  std::vector<std::vector<double>> secs(cells.size(), std::vector<double>(replicates));

  parallel_for(replicates, threads > 0 ? threads : default_thread_count(), [&](int r) {
    SimConfig sim;
    sim.params = truth.params(kind);
    sim.kind = kind;
    sim.length = length;
    sim.seed = mix_seed(seed, static_cast<std::uint64_t>(r) * 2654435761ULL);
    const std::vector<double> y = simulate_garch(sim);

    McmcConfig mc;
    mc.iterations = mcmc_iterations;
    mc.seed = mix_seed(sim.seed, 9999);
    const PosteriorSamples oracle = rwmh(y, kind, mc);

    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
      OptimizerConfig oc;
      oc.mc_samples = cells[ci].s;
      oc.seed = mix_seed(sim.seed, ci);
      const FitResult fit = fit_svb(y, kind, cells[ci].method, oc);
      Rng draw_rng(mix_seed(sim.seed, 1000 + ci));
      const Eigen::MatrixXd q = constrained_draws(fit.state, kind, eval_draws, draw_rng);
      for (int j = 0; j < npar; ++j) {
        std::vector<double> qc(q.col(j).begin(), q.col(j).end());
        std::vector<double> pc(oracle.draws.col(j).begin(), oracle.draws.col(j).end());
        acc[ci][r][j] = accuracy(qc, pc);
      }
      secs[ci][r] = fit.wall_seconds;
      std::fprintf(stderr, "replicate %d/%d cell %zu/%zu done\n", r + 1, replicates, ci + 1,
                   cells.size());
    }
  });

  const std::string path = b.out_path(out);
  {
    std::ofstream table(path);
    if (!table) throw UsageError("cannot write '" + path + "'");
    table << "method,S,parameter,mean_accuracy,mean_seconds\n";
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
      double mean_secs = 0.0;
      for (int r = 0; r < replicates; ++r) mean_secs += secs[ci][r];
      mean_secs /= replicates;
      for (int j = 0; j < npar; ++j) {
        double mean_acc = 0.0;
        for (int r = 0; r < replicates; ++r) mean_acc += acc[ci][r][j];
        mean_acc /= replicates;
        table << to_string(cells[ci].method) << "," << cells[ci].s << "," << names[j] << ","
              << format_double(mean_acc) << "," << format_double(mean_secs) << "\n";
      }
    }
  }
  b.write_manifest("replicate", cfg, path);
  std::printf("replicate: %d replicates x %zu cells -> %s\n", replicates, cells.size(),
              path.c_str());
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{std::string(kToolVersion) +
               " - variational and MCMC inference for GARCH(1,1) volatility models"};
  app.require_subcommand(1);

  // simulate ------------------------------------------------------------
  auto* sim_cmd = app.add_subcommand("simulate", "simulate a GARCH(1,1) return series");
  ConfigBinder sim_b(sim_cmd);
  std::string sim_model = "gaussian";
  TruthOptions sim_truth;
  int sim_length = 1000;
  std::uint64_t sim_seed = 1;
  std::string sim_out = "returns.csv";
  sim_b.bind("--model", sim_model, "innovation kind: gaussian, t, skewt");
  sim_truth.bind(sim_b);
  sim_b.bind("--length", sim_length, "number of observations");
  sim_b.bind("--seed", sim_seed, "random seed");
  sim_b.bind("--out", sim_out, "output CSV");

  // fit -----------------------------------------------------------------
  auto* fit_cmd = app.add_subcommand("fit", "variational fit of the posterior");
  ConfigBinder fit_b(fit_cmd);
  InputOptions fit_in;
  std::string fit_model = "gaussian", fit_method = "cv", fit_init, fit_out = "fit.json";
  OptimizerOptions fit_oo;
  fit_in.bind(fit_b);
  fit_b.bind("--model", fit_model, "innovation kind: gaussian, t, skewt");
  fit_b.bind("--method", fit_method, "estimator: cv, rt, mf");
  fit_oo.bind(fit_b);
  fit_b.bind("--init", fit_init, "fit document to warm-start from");
  fit_b.bind("--out", fit_out, "output fit document (JSON)");

  // mcmc ----------------------------------------------------------------
  auto* mcmc_cmd = app.add_subcommand("mcmc", "random-walk Metropolis reference posterior");
  ConfigBinder mcmc_b(mcmc_cmd);
  InputOptions mcmc_in;
  std::string mcmc_model = "gaussian", mcmc_out = "samples.csv";
  McmcConfig mcmc_cfg;
  mcmc_in.bind(mcmc_b);
  mcmc_b.bind("--model", mcmc_model, "innovation kind: gaussian, t, skewt");
  mcmc_b.bind("--iterations", mcmc_cfg.iterations, "total Metropolis iterations");
  mcmc_b.bind("--burnin", mcmc_cfg.burnin, "burn-in iterations (default: 10%)");
  mcmc_b.bind("--scale", mcmc_cfg.proposal_scale, "proposal scale (default: 2.38/sqrt(d))");
  mcmc_b.bind("--seed", mcmc_cfg.seed, "random seed");
  mcmc_b.bind("--out", mcmc_out, "output samples CSV");

  // accuracy ------------------------------------------------------------
  auto* acc_cmd = app.add_subcommand("accuracy", "posterior overlap between two sample sets");
  ConfigBinder acc_b(acc_cmd);
  std::string acc_fit, acc_mcmc, acc_csv_a, acc_csv_b, acc_out = "accuracy.csv";
  int acc_draws = 10000;
  std::uint64_t acc_seed = 1;
  acc_b.bind("--fit", acc_fit, "fit document whose q is compared");
  acc_b.bind("--mcmc", acc_mcmc, "reference samples CSV (from the mcmc command)");
  acc_b.bind("--csv-a", acc_csv_a, "first sample CSV (alternative to --fit)");
  acc_b.bind("--csv-b", acc_csv_b, "second sample CSV");
  acc_b.bind("--draws", acc_draws, "draws taken from q");
  acc_b.bind("--seed", acc_seed, "seed for the q draws");
  acc_b.bind("--out", acc_out, "output CSV");

  // sequential ----------------------------------------------------------
  auto* seq_cmd = app.add_subcommand("sequential", "streaming posterior updates");
  ConfigBinder seq_b(seq_cmd);
  InputOptions seq_in;
  std::string seq_model = "gaussian", seq_mode = "uvb", seq_prefix = "seq";
  int seq_initial = 0, seq_updates = 1;
  OptimizerOptions seq_oo;
  seq_in.bind(seq_b);
  seq_b.bind("--model", seq_model, "innovation kind: gaussian, t, skewt");
  seq_b.bind("--mode", seq_mode, "update rule: uvb, seqsvb");
  seq_b.bind("--initial", seq_initial, "observations in the initial batch fit");
  seq_b.bind("--updates", seq_updates, "number of update steps");
  seq_oo.bind(seq_b);
  seq_b.bind("--out-prefix", seq_prefix, "prefix for fit documents and the summary CSV");

  // ic --------------------------------------------------------------------
  auto* ic_cmd = app.add_subcommand("ic", "AIC/BIC at the likelihood maximum");
  ConfigBinder ic_b(ic_cmd);
  InputOptions ic_in;
  std::string ic_model = "gaussian", ic_out = "ic.csv";
  ic_in.bind(ic_b);
  ic_b.bind("--model", ic_model, "innovation kind: gaussian, t, skewt");
  ic_b.bind("--out", ic_out, "output CSV");

  // density-grid ----------------------------------------------------------
  auto* dg_cmd = app.add_subcommand("density-grid", "kernel density estimate of a sample column");
  ConfigBinder dg_b(dg_cmd);
  std::string dg_input, dg_column, dg_out = "density.csv";
  int dg_points = 512;
  dg_b.bind("--input", dg_input, "samples CSV with a header");
  dg_b.bind("--column", dg_column, "column name (default: first)");
  dg_b.bind("--grid", dg_points, "number of grid points");
  dg_b.bind("--out", dg_out, "output CSV (x, density)");

  // replicate ---------------------------------------------------------------
  auto* rep_cmd = app.add_subcommand(
      "replicate", "simulation study: accuracy/timing of estimators against the MCMC reference");
  ConfigBinder rep_b(rep_cmd);
  std::string rep_model = "gaussian", rep_out = "replicates.csv";
  std::vector<std::string> rep_methods{"cv", "rt"};
  std::vector<int> rep_samples{10};
  int rep_count = 20, rep_length = 1000, rep_mcmc_iters = 50000, rep_draws = 10000;
  int rep_threads = 0;
  std::uint64_t rep_seed = 1;
  TruthOptions rep_truth;
  rep_b.bind("--model", rep_model, "innovation kind: gaussian, t, skewt");
  rep_b.bind("--methods", rep_methods, "estimators to run (cv, rt, mf)")->delimiter(',');
  rep_b.bind("--samples-list", rep_samples, "Monte Carlo sample counts per estimator")
      ->delimiter(',');
  rep_b.bind("--replicates", rep_count, "number of simulated series");
  rep_b.bind("--length", rep_length, "observations per series");
  rep_truth.bind(rep_b);
  rep_b.bind("--mcmc-iterations", rep_mcmc_iters, "iterations of the reference sampler");
  rep_b.bind("--draws", rep_draws, "draws from each fitted q for the overlap score");
  rep_b.bind("--seed", rep_seed, "master seed (replicates derive sub-streams)");
  rep_b.bind("--threads", rep_threads, "worker threads (default: hardware)");
  rep_b.bind("--out", rep_out, "output CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim_cmd->parsed()) {
      const json cfg = sim_b.finalize("simulate");
      return cmd_simulate(sim_b, sim_model, sim_truth, sim_length, sim_seed, sim_out, cfg);
    }
    if (fit_cmd->parsed()) {
      const json cfg = fit_b.finalize("fit");
      return cmd_fit(fit_b, fit_in, fit_model, fit_method, fit_oo, fit_init, fit_out, cfg);
    }
    if (mcmc_cmd->parsed()) {
      const json cfg = mcmc_b.finalize("mcmc");
      return cmd_mcmc(mcmc_b, mcmc_in, mcmc_model, mcmc_cfg, mcmc_out, cfg);
    }
    if (acc_cmd->parsed()) {
      const json cfg = acc_b.finalize("accuracy");
      return cmd_accuracy(acc_b, acc_fit, acc_mcmc, acc_csv_a, acc_csv_b, acc_draws, acc_seed,
                          acc_out, cfg);
    }
    if (seq_cmd->parsed()) {
      const json cfg = seq_b.finalize("sequential");
      return cmd_sequential(seq_b, seq_in, seq_model, seq_mode, seq_initial, seq_updates, seq_oo,
                            seq_prefix, cfg);
    }
    if (ic_cmd->parsed()) {
      const json cfg = ic_b.finalize("ic");
      return cmd_ic(ic_b, ic_in, ic_model, ic_out, cfg);
    }
    if (dg_cmd->parsed()) {
      const json cfg = dg_b.finalize("density-grid");
      return cmd_density_grid(dg_b, dg_input, dg_column, dg_points, dg_out, cfg);
    }
    if (rep_cmd->parsed()) {
      const json cfg = rep_b.finalize("replicate");
      return cmd_replicate(rep_b, rep_model, rep_methods, rep_samples, rep_count, rep_length,
                           rep_truth, rep_mcmc_iters, rep_draws, rep_seed, rep_threads, rep_out,
                           cfg);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

}  // namespace garchvb
