#include "dualsig/noise.hpp"

#include <algorithm>
#include <cmath>

#include "dualsig/mathutil.hpp"

namespace dualsig::noise {

namespace {

// Dickey-Fuller tau percentiles, constant-only specification, by regression
// sample size. Interpolated in 1/n between rows and log-linearly in tau
// between columns; clamped to [0.001, 0.999] outside the table.
constexpr double kProbs[8] = {0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99};
constexpr double kSizes[6] = {25.0, 50.0, 100.0, 250.0, 500.0, 0.0};  // 0 = infinity
constexpr double kCrit[6][8] = {
    {-3.75, -3.33, -3.00, -2.62, -0.37, 0.00, 0.34, 0.72},
    {-3.58, -3.22, -2.93, -2.60, -0.40, -0.03, 0.29, 0.66},
    {-3.51, -3.17, -2.89, -2.58, -0.42, -0.05, 0.26, 0.63},
    {-3.46, -3.14, -2.88, -2.57, -0.42, -0.06, 0.24, 0.62},
    {-3.44, -3.13, -2.87, -2.57, -0.43, -0.07, 0.24, 0.61},
    {-3.43, -3.12, -2.86, -2.57, -0.44, -0.07, 0.23, 0.60},
};

double adf_pvalue(double tau, int nobs, bool* bounded) {
  // Row interpolation in 1/n.
  double cv[8];
  const double inv_n = 1.0 / static_cast<double>(std::max(nobs, 2));
  std::size_t hi = 5;
  for (std::size_t r = 1; r < 6; ++r) {
    const double inv_row = kSizes[r] == 0.0 ? 0.0 : 1.0 / kSizes[r];
    if (inv_n >= inv_row) {
      hi = r;
      break;
    }
  }
  if (inv_n >= 1.0 / kSizes[0]) {
    for (int c = 0; c < 8; ++c) cv[c] = kCrit[0][c];
  } else {
    const std::size_t lo = hi - 1;
    const double inv_lo = 1.0 / kSizes[lo];
    const double inv_hi = kSizes[hi] == 0.0 ? 0.0 : 1.0 / kSizes[hi];
    const double w = (inv_n - inv_hi) / (inv_lo - inv_hi);
    for (int c = 0; c < 8; ++c) cv[c] = w * kCrit[lo][c] + (1.0 - w) * kCrit[hi][c];
  }

  // Log-linear interpolation of p in tau; end slopes extrapolate.
  const auto lnp = [](double p) { return std::log(p); };
  double value;
  if (tau <= cv[0]) {
    const double slope = (lnp(kProbs[1]) - lnp(kProbs[0])) / (cv[1] - cv[0]);
    value = std::exp(lnp(kProbs[0]) + slope * (tau - cv[0]));
  } else if (tau >= cv[7]) {
    const double slope = (lnp(kProbs[7]) - lnp(kProbs[6])) / (cv[7] - cv[6]);
    value = std::exp(lnp(kProbs[7]) + slope * (tau - cv[7]));
  } else {
    std::size_t c = 0;
    while (tau > cv[c + 1]) ++c;
    const double w = (tau - cv[c]) / (cv[c + 1] - cv[c]);
    value = std::exp((1.0 - w) * lnp(kProbs[c]) + w * lnp(kProbs[c + 1]));
  }
  const double clamped = std::clamp(value, 0.001, 0.999);
  if (bounded != nullptr) *bounded = clamped != value;
  return clamped;
}

struct AdfFit {
  double tau = 0.0;
  double last_lag_t = 0.0;
  int nobs = 0;
};

AdfFit adf_fit(const Series& e, int lag) {
  const std::size_t n = e.size();
  const std::size_t p = static_cast<std::size_t>(lag);
  const std::size_t nobs = n - 1 - p;
  const std::size_t ncols = p + 2;
  std::vector<double> design(nobs * ncols);
  std::vector<double> y(nobs);
  for (std::size_t r = 0; r < nobs; ++r) {
    const std::size_t t = p + 1 + r;
    y[r] = e[t] - e[t - 1];
    design[r * ncols + 0] = 1.0;
    design[r * ncols + 1] = e[t - 1];
    for (std::size_t i = 1; i <= p; ++i) {
      design[r * ncols + 1 + i] = e[t - i] - e[t - i - 1];
    }
  }
  const auto fit = mathutil::lstsq(design, nobs, ncols, y);
  AdfFit out;
  if (fit.se[1] == 0.0) throw degenerate_input_error("adf: zero-variance regression");
  out.tau = fit.coef[1] / fit.se[1];
  out.nobs = static_cast<int>(nobs);
  if (p > 0) {
    const std::size_t last = ncols - 1;
    out.last_lag_t = fit.se[last] == 0.0 ? 0.0 : fit.coef[last] / fit.se[last];
  }
  return out;
}

}  // namespace

NoiseSeries extract_noise(const TimeSeries& x, const DualSignal& signal, double s_floor) {
  if (x.size() != signal.size()) {
    throw invalid_input_error("extract_noise: series and signal lengths differ");
  }
  if (s_floor <= 0.0) throw config_error("extract_noise: s_floor must be > 0");
  NoiseSeries eps(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    eps[i] = (x[i] - signal.mean()[i]) / std::max(signal.dispersion()[i], s_floor);
  }
  return eps;
}

AdfResult adf_test(const Series& e, int max_lag, bool prune) {
  const auto n = static_cast<long long>(e.size());
  int lag;
  if (max_lag < 0) {
    lag = static_cast<int>(std::floor(
        12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
    lag = std::min<long long>(lag, n - 20);
    lag = std::max(lag, 0);
    if (n < 20) throw invalid_input_error("adf_test needs at least 20 observations");
  } else {
    lag = max_lag;
    if (n < 20 + lag) {
      throw invalid_input_error("adf_test needs at least 20 + max_lag observations");
    }
  }

  AdfFit fit = adf_fit(e, lag);
  if (prune) {
    while (lag > 0 && std::fabs(fit.last_lag_t) < 1.645) {
      --lag;
      fit = adf_fit(e, lag);
    }
  }
  AdfResult out;
  out.statistic = fit.tau;
  out.lags = lag;
  out.p_value = adf_pvalue(fit.tau, fit.nobs, &out.p_bounded);
  return out;
}

LjungBoxResult ljung_box(const Series& e, int lags) {
  const auto n = static_cast<long long>(e.size());
  if (lags < 1 || lags >= n) throw invalid_input_error("ljung_box requires 1 <= lags < T");
  const double t = static_cast<double>(n);
  double q = 0.0;
  for (int k = 1; k <= lags; ++k) {
    const double rk = autocorrelation(e, k);
    q += rk * rk / (t - static_cast<double>(k));
  }
  q *= t * (t + 2.0);
  LjungBoxResult out;
  out.statistic = q;
  out.p_value = mathutil::chi2_sf(q, static_cast<double>(lags));
  return out;
}

double autocorrelation(const Series& x, int k) {
  const auto n = static_cast<long long>(x.size());
  if (k < 1 || k >= n) throw invalid_input_error("autocorrelation requires 1 <= k < T");
  const double mu = mathutil::mean(x);
  double num = 0.0, den = 0.0;
  for (long long t = 0; t < n; ++t) den += (x[t] - mu) * (x[t] - mu);
  if (den == 0.0) throw degenerate_input_error("autocorrelation undefined for constant series");
  for (long long t = 0; t + k < n; ++t) num += (x[t] - mu) * (x[t + k] - mu);
  return num / den;
}

RollingStats rolling_stats(const Series& x, int window) {
  const auto n = static_cast<long long>(x.size());
  if (window < 2) throw invalid_input_error("rolling window must be >= 2");
  if (n < 2LL * window) throw invalid_input_error("rolling_stats needs T >= 2*window");
  RollingStats out;
  const auto w = static_cast<std::size_t>(window);
  const std::size_t count = x.size() - w + 1;
  out.means.resize(count);
  out.stds.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    double mu = 0.0;
    for (std::size_t j = 0; j < w; ++j) mu += x[i + j];
    mu /= static_cast<double>(w);
    double var = 0.0;
    for (std::size_t j = 0; j < w; ++j) var += (x[i + j] - mu) * (x[i + j] - mu);
    out.means[i] = mu;
    out.stds[i] = std::sqrt(var / static_cast<double>(w));
  }
  const double sigma = mathutil::stddev(x);
  if (sigma == 0.0) {
    out.mean_drift = 0.0;
    out.std_drift = 0.0;
  } else {
    const auto [mn_m, mx_m] = std::minmax_element(out.means.begin(), out.means.end());
    const auto [mn_s, mx_s] = std::minmax_element(out.stds.begin(), out.stds.end());
    out.mean_drift = (*mx_m - *mn_m) / sigma;
    out.std_drift = (*mx_s - *mn_s) / sigma;
  }
  return out;
}

double kl_to_standard_normal(const Series& x) {
  if (x.size() < 2) throw invalid_input_error("kl_to_standard_normal needs T >= 2");
  const double mu = mathutil::mean(x);
  const double var = mathutil::variance(x);
  if (var == 0.0) throw degenerate_input_error("kl undefined for zero-variance series");
  return std::max(0.0, 0.5 * (var + mu * mu - 1.0 - std::log(var)));
}

DiagnosticsReport diagnose(const Series& e, const DiagnoseOptions& opts) {
  DiagnosticsReport rep;
  const auto n = static_cast<long long>(e.size());
  if (n < 2) return rep;
  rep.noise_mean = mathutil::mean(e);
  rep.noise_std = mathutil::stddev(e);

  try {
    const auto adf = adf_test(e, opts.adf_max_lag);
    rep.adf_statistic = adf.statistic;
    rep.adf_p = adf.p_value;
    rep.adf_lags = adf.lags;
    rep.adf_p_bounded = adf.p_bounded;
  } catch (const std::runtime_error&) {
  }

  const int lb_lags = opts.lb_lags > 0
                          ? opts.lb_lags
                          : std::max(1, static_cast<int>(std::min<long long>(10, n / 5)));
  if (lb_lags < n) {
    try {
      const auto lb = ljung_box(e, lb_lags);
      rep.lb_statistic = lb.statistic;
      rep.lb_p = lb.p_value;
      rep.lb_lags = lb_lags;
    } catch (const std::runtime_error&) {
    }
  }

  int win = opts.rolling_window > 0
                ? opts.rolling_window
                : static_cast<int>(std::clamp<long long>(n / 10, 5, 100));
  win = static_cast<int>(std::min<long long>(win, n / 2));
  if (win >= 2) {
    try {
      const auto rs = rolling_stats(e, win);
      rep.rolling_mean_drift = rs.mean_drift;
      rep.rolling_std_drift = rs.std_drift;
    } catch (const std::runtime_error&) {
    }
  }

  try {
    rep.kl_to_standard_normal = kl_to_standard_normal(e);
  } catch (const std::runtime_error&) {
  }

  const int acf_lags = opts.acf_lags > 0
                           ? opts.acf_lags
                           : static_cast<int>(std::min<long long>(20, n - 2));
  try {
    for (int k = 1; k <= acf_lags && k < n; ++k) rep.acf.push_back(autocorrelation(e, k));
  } catch (const std::runtime_error&) {
    rep.acf.clear();
  }
  return rep;
}

}  // namespace dualsig::noise
