#include "dualsig/types.hpp"

#include <cmath>
#include <utility>

namespace dualsig {

namespace {

void require_finite(const Series& v, const char* name) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw invalid_input_error(std::string(name) + " contains a non-finite value at t=" +
                                std::to_string(i + 1));
    }
  }
}

}  // namespace

TimeSeries::TimeSeries(Series values) : values_(std::move(values)) {
  if (values_.size() < 3) {
    throw invalid_input_error("time series needs at least 3 observations, got " +
                              std::to_string(values_.size()));
  }
  require_finite(values_, "time series");
}

DualSignal::DualSignal(Series mean, Series dispersion)
    : mean_(std::move(mean)), dispersion_(std::move(dispersion)) {
  if (mean_.size() != dispersion_.size()) {
    throw invalid_input_error("dual signal series lengths differ");
  }
  require_finite(mean_, "mean signal");
  require_finite(dispersion_, "dispersion signal");
  for (std::size_t i = 0; i < dispersion_.size(); ++i) {
    if (dispersion_[i] < 0.0) {
      throw invalid_input_error("dispersion must be non-negative, got " +
                                std::to_string(dispersion_[i]) + " at t=" + std::to_string(i + 1));
    }
  }
}

void Hyperparameters::validate() const {
  auto bad = [](const std::string& msg) { throw config_error(msg); };
  if (beta_mean < 0.0 || beta_disp < 0.0) bad("beta multipliers must be >= 0");
  if (gamma_mean < 0.0 || gamma_disp < 0.0) bad("gamma multipliers must be >= 0");
  if (theta < 0.0) bad("theta must be >= 0");
  if (spc_window < 2) bad("spc_window must be >= 2");
  if (!(p_cutoff > 0.0 && p_cutoff < 1.0)) bad("p_cutoff must be in (0,1)");
  if (scheme.kind == WeightSchemeKind::transformed && (scheme.k <= 0.0 || scheme.m <= 0.0)) {
    bad("transformed weight scheme requires k > 0 and m > 0");
  }
  if (beta_rule == BetaRule::estimated && c_beta <= 0.0) bad("c_beta must be > 0");
  if (huber_delta < 0.0) bad("huber_delta must be >= 0 (0 = auto)");
  if (s_floor < 0.0) bad("s_floor must be >= 0 (0 = auto)");
}

std::string to_string(Mode m) { return m == Mode::sequential ? "sequential" : "joint"; }

std::string to_string(FitMetricKind k) {
  switch (k) {
    case FitMetricKind::rmse: return "rmse";
    case FitMetricKind::mse: return "mse";
    case FitMetricKind::mae: return "mae";
    case FitMetricKind::sse: return "sse";
    case FitMetricKind::maxse: return "maxse";
    case FitMetricKind::maxae: return "maxae";
  }
  return "?";
}

std::string to_string(RegKind k) { return k == RegKind::mae ? "mae" : "rmse"; }

std::string to_string(ZMode m) { return m == ZMode::preceding ? "preceding" : "max_of_both"; }

std::string to_string(BetaRule r) { return r == BetaRule::fixed ? "fixed" : "estimated"; }

std::string to_string(WeightSchemeKind k) {
  switch (k) {
    case WeightSchemeKind::none: return "none";
    case WeightSchemeKind::linear: return "linear";
    case WeightSchemeKind::transformed: return "transformed";
    case WeightSchemeKind::binary: return "binary";
  }
  return "?";
}

Series first_diff(const Series& x) {
  if (x.size() < 2) throw invalid_input_error("first_diff needs at least 2 points");
  Series out(x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) out[i] = x[i + 1] - x[i];
  return out;
}

Series second_diff(const Series& x) {
  if (x.size() < 3) throw invalid_input_error("second_diff needs at least 3 points");
  Series out(x.size() - 2);
  for (std::size_t i = 0; i + 2 < x.size(); ++i) out[i] = x[i + 2] - 2.0 * x[i + 1] + x[i];
  return out;
}

Series moving_range(const Series& x) {
  if (x.size() < 2) throw invalid_input_error("moving_range needs at least 2 points");
  Series out(x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) out[i] = std::fabs(x[i + 1] - x[i]);
  return out;
}

}  // namespace dualsig
