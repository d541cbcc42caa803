#pragma once

#include <cstddef>
#include <vector>

#include "dualsig/types.hpp"

namespace dualsig::mathutil {

double mean(const Series& x);

/// Population variance (divide by T).
double variance(const Series& x);
double stddev(const Series& x);

/// Pearson correlation. Throws degenerate_input_error on zero variance.
double correlation(const Series& x, const Series& y);

/// Standard normal CDF, |error| <= 1e-15 via erfc.
double normal_cdf(double z);

/// Two-sided tail probability 2*(1 - Phi(|z|)), clamped to [1e-300, 1].
double two_sided_p(double abs_z);

/// Regularized upper incomplete gamma Q(a, x); Q(a, 0) = 1.
double gammq(double a, double x);

/// Chi-square survival function P(X > x) with k degrees of freedom.
double chi2_sf(double x, double k);

/// q-th sample quantile (linear interpolation between order statistics).
double quantile(Series sorted_or_not, double q);

struct LstsqResult {
  std::vector<double> coef;     ///< length k
  std::vector<double> se;       ///< coefficient standard errors, length k
  double rss = 0.0;             ///< residual sum of squares
  int dof = 0;                  ///< nrows - k
};

/// Least squares via Householder QR. `a` is row-major nrows x ncols.
/// Throws degenerate_input_error on rank deficiency.
LstsqResult lstsq(const std::vector<double>& a, std::size_t nrows, std::size_t ncols,
                  const std::vector<double>& y);

}  // namespace dualsig::mathutil
