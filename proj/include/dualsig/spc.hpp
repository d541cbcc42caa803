#pragma once

#include "dualsig/types.hpp"

namespace dualsig::spc {

/// Average-moving-range-to-sigma conversion constant for individuals charts.
inline constexpr double d2 = 1.128;

/// Absolute Z-values per point. Entries are NaN where the required window
/// does not fully exist, +inf where the window is constant but the point
/// deviates from it.
class ZSeries {
 public:
  explicit ZSeries(Series values);
  const Series& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool defined(std::size_t i) const;

 private:
  Series values_;
};

/// |Z_t| = d2 * |X_t - MAn_t| / MAn_t(MR_t) over a preceding or succeeding
/// n-point window; max_of_both takes the larger side where both exist and
/// the available side near the edges. Requires n >= 2 and T >= n+2.
ZSeries z_values(const TimeSeries& x, int n, ZMode mode);

/// p_t = 2 * (1 - Phi(|Z_t|)), clamped to [1e-300, 1]; undefined Z maps to 1.
Series p_values(const ZSeries& z);

/// Regularization weights in [0,1] from p-values under the selected scheme.
/// p_cutoff applies to the binary scheme. Throws config_error on bad
/// scheme parameters.
Series weights(const Series& p, const WeightScheme& scheme, double p_cutoff);

/// z -> p -> w pipeline on the observed series.
Series weights_for(const TimeSeries& x, const Hyperparameters& h);

}  // namespace dualsig::spc
