#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dualsig/errors.hpp"

namespace dualsig {

/// Dense, uniformly spaced series. Index is 0-based internally; reports and
/// file formats use 1-based t.
using Series = std::vector<double>;

/// Validated observation series: finite values, length >= 3.
class TimeSeries {
 public:
  explicit TimeSeries(Series values);

  const Series& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  Series values_;
};

/// Paired mean/dispersion series of equal length with dispersion >= 0.
class DualSignal {
 public:
  DualSignal(Series mean, Series dispersion);

  const Series& mean() const { return mean_; }
  const Series& dispersion() const { return dispersion_; }
  std::size_t size() const { return mean_.size(); }

 private:
  Series mean_;
  Series dispersion_;
};

using NoiseSeries = Series;

enum class Mode { sequential, joint };
enum class FitMetricKind { rmse, mse, mae, sse, maxse, maxae };
enum class RegKind { mae, rmse };
enum class ZMode { preceding, max_of_both };
enum class BetaRule { fixed, estimated };
enum class WeightSchemeKind { none, linear, transformed, binary };

/// Regularization weighting scheme. k and m apply to the transformed scheme
/// only; the binary cutoff p* lives in Hyperparameters::p_cutoff.
struct WeightScheme {
  WeightSchemeKind kind = WeightSchemeKind::binary;
  double k = 9.0;
  double m = 2.0;
};

/// Full hyperparameter vector. huber_delta and s_floor equal to 0 mean
/// "derive from the series scale" (see OptimizerConfig).
struct Hyperparameters {
  Mode mode = Mode::sequential;
  double beta_mean = 1.0;
  double beta_disp = 1.0;
  double gamma_mean = 0.5;
  double gamma_disp = 0.5;
  double theta = 1.0;
  int spc_window = 7;
  double p_cutoff = 0.0025;
  WeightScheme scheme{};
  FitMetricKind fit_kind = FitMetricKind::rmse;
  RegKind reg_kind = RegKind::mae;
  ZMode z_mode = ZMode::preceding;
  BetaRule beta_rule = BetaRule::estimated;
  double c_beta = 25.0;
  bool disp_weighting = false;
  double huber_delta = 0.0;
  double s_floor = 0.0;

  /// Throws config_error on any out-of-range field.
  void validate() const;
};

std::string to_string(Mode m);
std::string to_string(FitMetricKind k);
std::string to_string(RegKind k);
std::string to_string(ZMode m);
std::string to_string(BetaRule r);
std::string to_string(WeightSchemeKind k);

/// output_i = x_{i+1} - x_i, length T-1. Throws invalid_input_error if T < 2.
Series first_diff(const Series& x);

/// output_i = x_{i+2} - 2 x_{i+1} + x_i, length T-2. Throws if T < 3.
Series second_diff(const Series& x);

/// output_i = |x_{i+1} - x_i|, length T-1. Throws if T < 2.
Series moving_range(const Series& x);

}  // namespace dualsig
