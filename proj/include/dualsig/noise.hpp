#pragma once

#include <limits>

#include "dualsig/types.hpp"

namespace dualsig::noise {

/// Stationarity/whiteness diagnostics of an isolated noise series. Test
/// fields are NaN when the corresponding test could not run (series too
/// short or degenerate).
struct DiagnosticsReport {
  double adf_statistic = std::numeric_limits<double>::quiet_NaN();
  double adf_p = std::numeric_limits<double>::quiet_NaN();
  int adf_lags = 0;
  bool adf_p_bounded = false;  ///< p hit the table clamp [0.001, 0.999]
  double lb_statistic = std::numeric_limits<double>::quiet_NaN();
  double lb_p = std::numeric_limits<double>::quiet_NaN();
  int lb_lags = 0;
  double rolling_mean_drift = std::numeric_limits<double>::quiet_NaN();
  double rolling_std_drift = std::numeric_limits<double>::quiet_NaN();
  double kl_to_standard_normal = std::numeric_limits<double>::quiet_NaN();
  double noise_mean = std::numeric_limits<double>::quiet_NaN();
  double noise_std = std::numeric_limits<double>::quiet_NaN();
  Series acf;
  /// |Pearson correlation| between noise and the learned signals; filled by
  /// decompose, NaN for standalone series diagnostics.
  double corr_noise_mean = std::numeric_limits<double>::quiet_NaN();
  double corr_noise_disp = std::numeric_limits<double>::quiet_NaN();
};

/// eps_t = (x_t - m_t) / max(s_t, s_floor).
NoiseSeries extract_noise(const TimeSeries& x, const DualSignal& signal, double s_floor);

struct AdfResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int lags = 0;
  bool p_bounded = false;
};

/// Augmented Dickey-Fuller unit-root test, constant-only specification.
/// max_lag < 0 selects the lag by the 12*(T/100)^0.25 rule; when prune is
/// set the longest lag is dropped while its |t| < 1.645.
AdfResult adf_test(const Series& e, int max_lag = -1, bool prune = true);

struct LjungBoxResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Q = T(T+2) * sum_k r_k^2 / (T-k); p from the chi-square survival
/// function with `lags` degrees of freedom.
LjungBoxResult ljung_box(const Series& e, int lags);

/// Lag-k sample autocorrelation; throws degenerate_input_error on a
/// constant series.
double autocorrelation(const Series& x, int k);

struct RollingStats {
  Series means;
  Series stds;
  double mean_drift = 0.0;  ///< (max - min) of rolling means / overall std
  double std_drift = 0.0;
};

RollingStats rolling_stats(const Series& x, int window);

/// Gaussian-moment KL divergence to N(0,1): (s^2 + mu^2 - 1 - ln s^2) / 2.
double kl_to_standard_normal(const Series& x);

struct DiagnoseOptions {
  int adf_max_lag = -1;   ///< -1 = auto rule
  int lb_lags = -1;       ///< -1 = min(10, T/5)
  int rolling_window = -1;
  int acf_lags = -1;      ///< -1 = min(20, T-2)
};

/// Runs the full battery; tests that cannot run leave NaN fields.
DiagnosticsReport diagnose(const Series& e, const DiagnoseOptions& opts = {});

}  // namespace dualsig::noise
