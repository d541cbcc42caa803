#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dualsig/noise.hpp"
#include "dualsig/optimizer.hpp"
#include "dualsig/synth.hpp"
#include "dualsig/types.hpp"

namespace dualsig::tuning {

/// Composite stationarity objective weights; lower score is better.
/// score = adf * max(0, adf_p - 0.05) + lb * max(0, 0.05 - lb_p) + kl * KL
///       + drift * (mean_drift + std_drift) + indep * (|corr eM| + |corr eS|)
///       [+ step * fraction of |dM| > jump_threshold, sign chosen by the user]
struct ScoreWeights {
  double adf = 1.0;
  double lb = 10.0;
  double kl = 1.0;
  double drift = 0.5;
  double indep = 0.5;
  double step = 0.0;  ///< optional steppedness term; negative rewards steps
  double jump_threshold = 0.0;
};

double stationarity_score(const noise::DiagnosticsReport& report, const ScoreWeights& w);

enum class Method { grid, nelder_mead, grid_then_nelder_mead };

/// Declared search space: per-parameter value choices layered over a base h.
/// Numeric names: beta_mean, beta_disp, gamma_mean, gamma_disp, theta,
/// p_cutoff, spc_window, scheme_k, scheme_m, huber_delta, s_floor.
/// Enum names: mode, weight_scheme, fit_kind, reg_kind, z_mode, beta_rule,
/// disp_weighting.
struct TuningSpec {
  Hyperparameters base;
  std::map<std::string, std::vector<double>> numeric_grid;
  std::map<std::string, std::vector<std::string>> enum_grid;
  /// Parameters the simplex refines; each must appear in numeric_grid (its
  /// grid range is the box the refinement stays inside).
  std::vector<std::string> refine;
  int budget = 64;
  std::vector<std::uint64_t> seeds{0};
  /// When set, the input series is regenerated from this scenario per seed
  /// and the score is averaged across seeds.
  std::optional<synth::ScenarioSpec> scenario;
  ScoreWeights weights;
  Method method = Method::grid_then_nelder_mead;
  opt::OptimizerConfig optimizer;
  bool parallel = true;  ///< evaluate grid candidates concurrently

  void validate() const;
};

struct TraceEntry {
  Hyperparameters h;
  double score = 0.0;
  noise::DiagnosticsReport diagnostics;  ///< first-seed diagnostics
  bool failed = false;
  std::string note;
};

struct TuningResult {
  Hyperparameters best_h;
  double best_score = 0.0;
  std::vector<TraceEntry> trace;
};

/// Grid screening plus optional simplex refinement of the continuous
/// multipliers (log-scale). Deterministic given the spec; throws
/// config_error when every evaluation failed.
TuningResult tune(const TimeSeries& x, const TuningSpec& spec);

/// Named access used by the grid/simplex machinery and config parsing.
double get_numeric(const Hyperparameters& h, const std::string& name);
void set_numeric(Hyperparameters& h, const std::string& name, double value);
void set_enum(Hyperparameters& h, const std::string& name, const std::string& value);

}  // namespace dualsig::tuning
