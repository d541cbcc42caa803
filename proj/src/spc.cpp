#include "dualsig/spc.hpp"

#include <cmath>
#include <limits>

#include "dualsig/mathutil.hpp"

namespace dualsig::spc {

namespace {

constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

double side_z(double xt, double window_mean, double window_mean_mr) {
  const double num = std::fabs(xt - window_mean);
  if (window_mean_mr == 0.0) {
    // Constant window: the point either matches it perfectly or deviates
    // with maximal assignability.
    return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return d2 * num / window_mean_mr;
}

}  // namespace

ZSeries::ZSeries(Series values) : values_(std::move(values)) {}

bool ZSeries::defined(std::size_t i) const { return !std::isnan(values_[i]); }

ZSeries z_values(const TimeSeries& x, int n, ZMode mode) {
  const std::size_t t_count = x.size();
  if (n < 2) throw invalid_input_error("spc window must satisfy n >= 2");
  if (t_count < static_cast<std::size_t>(n) + 2) {
    throw invalid_input_error("series too short for spc window: need T >= n+2");
  }
  const Series& v = x.values();
  const std::size_t nn = static_cast<std::size_t>(n);

  // Prefix sums of values and of moving ranges; mr[j] = |x_j - x_{j-1}|.
  std::vector<double> pv(t_count + 1, 0.0), pm(t_count, 0.0);
  for (std::size_t i = 0; i < t_count; ++i) pv[i + 1] = pv[i] + v[i];
  for (std::size_t j = 1; j < t_count; ++j) pm[j] = pm[j - 1] + std::fabs(v[j] - v[j - 1]);

  // Preceding side at i: values [i-n, i-1], ranges j in [i-n+1, i-1].
  auto z_prec = [&](std::size_t i) -> double {
    if (i < nn) return kUndefined;
    const double ma = (pv[i] - pv[i - nn]) / static_cast<double>(nn);
    const double mr = (pm[i - 1] - pm[i - nn]) / static_cast<double>(nn - 1);
    return side_z(v[i], ma, mr);
  };
  // Succeeding side at i: values [i+1, i+n], ranges j in [i+2, i+n].
  auto z_succ = [&](std::size_t i) -> double {
    if (i + nn >= t_count) return kUndefined;
    const double ma = (pv[i + nn + 1] - pv[i + 1]) / static_cast<double>(nn);
    const double mr = (pm[i + nn] - pm[i + 1]) / static_cast<double>(nn - 1);
    return side_z(v[i], ma, mr);
  };

  Series z(t_count, kUndefined);
  for (std::size_t i = 0; i < t_count; ++i) {
    if (mode == ZMode::preceding) {
      z[i] = z_prec(i);
    } else {
      const double zp = z_prec(i);
      const double zs = z_succ(i);
      if (std::isnan(zp)) {
        z[i] = zs;
      } else if (std::isnan(zs)) {
        z[i] = zp;
      } else {
        z[i] = std::max(zp, zs);
      }
    }
  }
  return ZSeries(std::move(z));
}

Series p_values(const ZSeries& z) {
  Series p(z.size(), 1.0);
  for (std::size_t i = 0; i < z.size(); ++i) {
    p[i] = z.defined(i) ? mathutil::two_sided_p(z.values()[i]) : 1.0;
  }
  return p;
}

Series weights(const Series& p, const WeightScheme& scheme, double p_cutoff) {
  if (scheme.kind == WeightSchemeKind::transformed && (scheme.k <= 0.0 || scheme.m <= 0.0)) {
    throw config_error("transformed weight scheme requires k > 0 and m > 0");
  }
  if (scheme.kind == WeightSchemeKind::binary && !(p_cutoff > 0.0 && p_cutoff < 1.0)) {
    throw config_error("binary weight scheme requires p_cutoff in (0,1)");
  }
  Series w(p.size(), 1.0);
  switch (scheme.kind) {
    case WeightSchemeKind::none:
      break;
    case WeightSchemeKind::linear:
      for (std::size_t i = 0; i < p.size(); ++i) w[i] = p[i];
      break;
    case WeightSchemeKind::transformed:
      for (std::size_t i = 0; i < p.size(); ++i) {
        w[i] = 1.0 - std::exp(-scheme.k * std::pow(p[i], scheme.m));
      }
      break;
    case WeightSchemeKind::binary:
      for (std::size_t i = 0; i < p.size(); ++i) w[i] = p[i] <= p_cutoff ? 0.0 : 1.0;
      break;
  }
  return w;
}

Series weights_for(const TimeSeries& x, const Hyperparameters& h) {
  const ZSeries z = z_values(x, h.spc_window, h.z_mode);
  return weights(p_values(z), h.scheme, h.p_cutoff);
}

}  // namespace dualsig::spc
