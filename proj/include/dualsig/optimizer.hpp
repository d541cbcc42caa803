#pragma once

#include <functional>
#include <optional>

#include "dualsig/loss.hpp"
#include "dualsig/noise.hpp"
#include "dualsig/types.hpp"

namespace dualsig::opt {

struct OptimizerConfig {
  int max_iterations = 5000;
  double rel_tolerance = 1e-8;
  /// Consecutive small-relative-change iterations required to stop.
  int patience = 3;
  /// huber_delta = huber_delta_rel * series scale when h.huber_delta == 0.
  double huber_delta_rel = 1e-3;
  double s_floor_rel = 1e-6;
  int init_window = 5;
  int lbfgs_memory = 10;
  int max_linesearch = 50;
  /// OpenMP inside objective kernels; results are bit-identical either way.
  bool parallel = false;
  /// Warm-start override for the initial dual signal.
  std::optional<DualSignal> init;

  void validate() const;
};

/// Pseudo-Huber surrogate delta*(sqrt(1+(v/delta)^2)-1); C-infinity, even,
/// -> |v| as delta -> 0.
double smooth_abs(double v, double delta);

/// d/dv smooth_abs = v / sqrt(v^2 + delta^2).
double smooth_abs_grad(double v, double delta);

/// beta = c_beta * RMSE(X, mean X) / (sqrt(T) * mean |dX|). Throws
/// degenerate_input_error on a constant series.
double beta_estimate(const TimeSeries& x, double c_beta);

enum class Stage { mean_only, disp_only, joint };

/// Smoothed loss over packed decision variables: the mean signal directly,
/// the dispersion through S = softplus(u) + s_floor. All absolute values are
/// pseudo-Huber smoothed and square roots carry a tiny additive epsilon, so
/// the objective is C^1 everywhere and the analytic gradient matches finite
/// differences. Exact (non-smoothed) losses are reported separately at the
/// solution.
class SmoothedObjective {
 public:
  SmoothedObjective(Stage stage, Series x, Series w_mean, Series w_disp,
                    loss::ResolvedParams params, double huber_delta, double s_floor,
                    double scale, bool parallel);

  /// Fixed |R| target for the disp_only stage.
  void set_disp_target(Series r_abs);

  std::size_t dim() const;
  std::size_t length() const { return x_.size(); }

  /// Objective value; fills the gradient when grad != nullptr (resized to
  /// dim()). Not thread-safe per instance (reuses workspace buffers).
  double eval(const Series& z, Series* grad) const;

  Series mean_of(const Series& z) const;
  Series disp_of(const Series& z) const;
  double disp_at(double u) const;
  double disp_inverse(double s) const;  ///< u with softplus(u) + s_floor = s

 private:
  Stage stage_;
  Series x_;
  Series w_mean_;
  Series w_disp_;
  loss::ResolvedParams p_;
  double delta_;
  double s_floor_;
  double sqrt_eps_;  ///< additive epsilon inside smoothed square roots
  bool parallel_;
  Series target_abs_;
  mutable Series buf_m_, buf_s_, buf_a_, buf_d1_, buf_d2_, buf_e_;
};

struct LbfgsOptions {
  int memory = 10;
  int max_iterations = 5000;
  double rel_tolerance = 1e-8;
  int patience = 3;
  int max_linesearch = 50;
  double armijo_c1 = 1e-4;
};

struct LbfgsOutcome {
  Series x;
  double f = 0.0;
  int iterations = 0;
  int evals = 0;
  bool converged = false;
  /// Objective at each accepted iterate (strictly non-increasing).
  std::vector<double> accepted_f;
};

using ObjectiveFn = std::function<double(const Series&, Series*)>;

/// Limited-memory quasi-Newton minimization with backtracking line search
/// under a sufficient-decrease condition. Returns the best-seen iterate and
/// never throws on non-convergence.
LbfgsOutcome lbfgs_minimize(const ObjectiveFn& fn, Series x0, const LbfgsOptions& opt);

struct DecompositionResult {
  DualSignal signal;
  NoiseSeries noise;
  Series weights;
  double loss_value = 0.0;  ///< exact objective of the final (or joint) stage
  loss::LossBreakdown mean_loss;
  loss::LossBreakdown disp_loss;
  double combined_loss = 0.0;  ///< mean.total + theta * disp.total
  bool converged = false;
  int iterations = 0;
  noise::DiagnosticsReport diagnostics;
  loss::ResolvedParams params;  ///< multipliers actually used
  double huber_delta = 0.0;
  double s_floor = 0.0;
};

DecompositionResult decompose_sequential(const TimeSeries& x, const Hyperparameters& h,
                                         const OptimizerConfig& cfg = {});

DecompositionResult decompose_joint(const TimeSeries& x, const Hyperparameters& h,
                                    const OptimizerConfig& cfg = {});

/// Dispatches on h.mode.
DecompositionResult decompose(const TimeSeries& x, const Hyperparameters& h,
                              const OptimizerConfig& cfg = {});

}  // namespace dualsig::opt
