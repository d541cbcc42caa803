#include "dualsig/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "dualsig/mathutil.hpp"
#include "dualsig/spc.hpp"

namespace dualsig::opt {

namespace {

struct Resolved {
  loss::ResolvedParams params;
  Series w_mean;
  Series w_disp;
  double scale = 1.0;
  double huber_delta = 0.0;
  double s_floor = 0.0;
};

double series_scale(const Series& x) {
  const double sd = mathutil::stddev(x);
  if (sd > 0.0) return sd;
  return std::max(1.0, std::fabs(mathutil::mean(x)));
}

Resolved resolve(const TimeSeries& x, const Hyperparameters& h, const OptimizerConfig& cfg) {
  h.validate();
  cfg.validate();
  Resolved r;
  r.scale = series_scale(x.values());
  r.huber_delta = h.huber_delta > 0.0 ? h.huber_delta : cfg.huber_delta_rel * r.scale;
  r.s_floor = h.s_floor > 0.0 ? h.s_floor : cfg.s_floor_rel * r.scale;
  r.w_mean = spc::weights_for(x, h);
  r.w_disp = h.disp_weighting ? r.w_mean : Series(x.size(), 1.0);
  const double beta =
      h.beta_rule == BetaRule::estimated ? beta_estimate(x, h.c_beta) : h.beta_mean;
  r.params.beta_mean = beta;
  r.params.beta_disp = h.beta_rule == BetaRule::estimated ? beta : h.beta_disp;
  r.params.gamma_mean = h.gamma_mean;
  r.params.gamma_disp = h.gamma_disp;
  r.params.theta = h.theta;
  r.params.fit_kind = h.fit_kind;
  r.params.reg_kind = h.reg_kind;
  return r;
}

// Centered moving average, window shrunk at the edges.
Series centered_ma(const Series& x, int window) {
  const auto t = static_cast<long long>(x.size());
  const long long half = std::max(1, window) / 2;
  Series out(x.size());
  for (long long i = 0; i < t; ++i) {
    const long long lo = std::max(0LL, i - half);
    const long long hi = std::min(t - 1, i + half);
    double acc = 0.0;
    for (long long j = lo; j <= hi; ++j) acc += x[j];
    out[i] = acc / static_cast<double>(hi - lo + 1);
  }
  return out;
}

// Centered rolling standard deviation (population within the window).
Series centered_rolling_std(const Series& x, int window) {
  const auto t = static_cast<long long>(x.size());
  const long long half = std::max(1, window) / 2;
  Series out(x.size());
  for (long long i = 0; i < t; ++i) {
    const long long lo = std::max(0LL, i - half);
    const long long hi = std::min(t - 1, i + half);
    const double n = static_cast<double>(hi - lo + 1);
    double mu = 0.0;
    for (long long j = lo; j <= hi; ++j) mu += x[j];
    mu /= n;
    double var = 0.0;
    for (long long j = lo; j <= hi; ++j) var += (x[j] - mu) * (x[j] - mu);
    out[i] = std::sqrt(var / n);
  }
  return out;
}

Series initial_u(const SmoothedObjective& obj, const Series& s0, double s_floor, double scale) {
  Series u(s0.size());
  // Stay a little off the floor so the softplus gradient does not vanish.
  const double lift = std::max(2.0 * s_floor, 1e-3 * scale);
  for (std::size_t i = 0; i < s0.size(); ++i) u[i] = obj.disp_inverse(std::max(s0[i], lift));
  return u;
}

LbfgsOptions lbfgs_options(const OptimizerConfig& cfg) {
  LbfgsOptions o;
  o.memory = cfg.lbfgs_memory;
  o.max_iterations = cfg.max_iterations;
  o.rel_tolerance = cfg.rel_tolerance;
  o.patience = cfg.patience;
  o.max_linesearch = cfg.max_linesearch;
  return o;
}

void finalize(DecompositionResult& res, const TimeSeries& x, const Resolved& r) {
  const Series& eps = res.noise;
  res.diagnostics = noise::diagnose(eps);
  try {
    res.diagnostics.corr_noise_mean = std::fabs(mathutil::correlation(eps, res.signal.mean()));
  } catch (const std::runtime_error&) {
  }
  try {
    res.diagnostics.corr_noise_disp =
        std::fabs(mathutil::correlation(eps, res.signal.dispersion()));
  } catch (const std::runtime_error&) {
  }
  res.params = r.params;
  res.huber_delta = r.huber_delta;
  res.s_floor = r.s_floor;
  res.weights = r.w_mean;
  (void)x;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (max_iterations < 1) throw config_error("max_iterations must be >= 1");
  if (rel_tolerance <= 0.0) throw config_error("rel_tolerance must be > 0");
  if (patience < 1) throw config_error("patience must be >= 1");
  if (huber_delta_rel <= 0.0) throw config_error("huber_delta_rel must be > 0");
  if (s_floor_rel <= 0.0) throw config_error("s_floor_rel must be > 0");
  if (init_window < 1) throw config_error("init_window must be >= 1");
  if (lbfgs_memory < 1) throw config_error("lbfgs_memory must be >= 1");
  if (max_linesearch < 1) throw config_error("max_linesearch must be >= 1");
}

double beta_estimate(const TimeSeries& x, double c_beta) {
  if (c_beta <= 0.0) throw config_error("c_beta must be > 0");
  const Series& v = x.values();
  const double t = static_cast<double>(v.size());
  const double rmse_about_mean = mathutil::stddev(v);
  double mean_abs_diff = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) mean_abs_diff += std::fabs(v[i] - v[i - 1]);
  mean_abs_diff /= t - 1.0;
  if (mean_abs_diff == 0.0) {
    throw degenerate_input_error("beta_estimate undefined for constant series");
  }
  return c_beta * rmse_about_mean / (std::sqrt(t) * mean_abs_diff);
}

DecompositionResult decompose_sequential(const TimeSeries& x, const Hyperparameters& h,
                                         const OptimizerConfig& cfg) {
  const Resolved r = resolve(x, h, cfg);
  const Series& xv = x.values();
  const std::size_t t = xv.size();

  SmoothedObjective mean_obj(Stage::mean_only, xv, r.w_mean, r.w_disp, r.params, r.huber_delta,
                             r.s_floor, r.scale, cfg.parallel);
  Series m0 = cfg.init ? cfg.init->mean() : centered_ma(xv, cfg.init_window);
  const auto stage1 = lbfgs_minimize(
      [&](const Series& z, Series* g) { return mean_obj.eval(z, g); }, std::move(m0),
      lbfgs_options(cfg));
  const Series& m = stage1.x;

  Series r_abs(t);
  for (std::size_t i = 0; i < t; ++i) r_abs[i] = std::fabs(xv[i] - m[i]);

  SmoothedObjective disp_obj(Stage::disp_only, xv, r.w_mean, r.w_disp, r.params, r.huber_delta,
                             r.s_floor, r.scale, cfg.parallel);
  disp_obj.set_disp_target(r_abs);
  Series s0 = cfg.init ? cfg.init->dispersion() : centered_rolling_std(r_abs, cfg.init_window);
  const auto stage2 = lbfgs_minimize(
      [&](const Series& z, Series* g) { return disp_obj.eval(z, g); },
      initial_u(disp_obj, s0, r.s_floor, r.scale), lbfgs_options(cfg));
  const Series s = disp_obj.disp_of(stage2.x);

  Series eps(t);
  for (std::size_t i = 0; i < t; ++i) eps[i] = (xv[i] - m[i]) / s[i];

  DecompositionResult res{DualSignal(m, s), std::move(eps), {}, 0.0, {}, {}, 0.0,
                          stage1.converged && stage2.converged,
                          stage1.iterations + stage2.iterations};
  res.mean_loss = loss::loss_mean(xv, m, r.w_mean, r.params.beta_mean, r.params.gamma_mean,
                                  r.params.fit_kind, r.params.reg_kind);
  res.disp_loss = loss::loss_disp(r_abs, s, r.w_disp, r.params.beta_disp, r.params.gamma_disp,
                                  r.params.fit_kind, r.params.reg_kind);
  res.loss_value = res.disp_loss.total;
  res.combined_loss = res.mean_loss.total + r.params.theta * res.disp_loss.total;
  finalize(res, x, r);
  return res;
}

DecompositionResult decompose_joint(const TimeSeries& x, const Hyperparameters& h,
                                    const OptimizerConfig& cfg) {
  if (h.theta <= 0.0) throw config_error("joint decomposition requires theta > 0");
  const Resolved r = resolve(x, h, cfg);
  const Series& xv = x.values();
  const std::size_t t = xv.size();

  SmoothedObjective obj(Stage::joint, xv, r.w_mean, r.w_disp, r.params, r.huber_delta, r.s_floor,
                        r.scale, cfg.parallel);
  Series m0 = cfg.init ? cfg.init->mean() : centered_ma(xv, cfg.init_window);
  Series r0(t);
  for (std::size_t i = 0; i < t; ++i) r0[i] = std::fabs(xv[i] - m0[i]);
  Series s0 = cfg.init ? cfg.init->dispersion() : centered_rolling_std(r0, cfg.init_window);
  Series z0(2 * t);
  std::copy(m0.begin(), m0.end(), z0.begin());
  const Series u0 = initial_u(obj, s0, r.s_floor, r.scale);
  std::copy(u0.begin(), u0.end(), z0.begin() + static_cast<long>(t));

  const auto run = lbfgs_minimize([&](const Series& z, Series* g) { return obj.eval(z, g); },
                                  std::move(z0), lbfgs_options(cfg));
  const Series m = obj.mean_of(run.x);
  const Series s = obj.disp_of(run.x);

  Series eps(t);
  for (std::size_t i = 0; i < t; ++i) eps[i] = (xv[i] - m[i]) / s[i];

  DecompositionResult res{DualSignal(m, s), std::move(eps), {}, 0.0, {}, {}, 0.0, run.converged,
                          run.iterations};
  const auto joint = loss::loss_joint(xv, m, s, r.w_mean, r.w_disp, r.params);
  res.mean_loss = joint.mean;
  res.disp_loss = joint.disp;
  res.loss_value = joint.combined;
  res.combined_loss = joint.combined;
  finalize(res, x, r);
  return res;
}

DecompositionResult decompose(const TimeSeries& x, const Hyperparameters& h,
                              const OptimizerConfig& cfg) {
  return h.mode == Mode::sequential ? decompose_sequential(x, h, cfg)
                                    : decompose_joint(x, h, cfg);
}

}  // namespace dualsig::opt
