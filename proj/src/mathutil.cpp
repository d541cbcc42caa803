#include "dualsig/mathutil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dualsig::mathutil {

double mean(const Series& x) {
  if (x.empty()) throw invalid_input_error("mean of empty series");
  double acc = 0.0;
  for (double v : x) acc += v;
  return acc / static_cast<double>(x.size());
}

double variance(const Series& x) {
  const double mu = mean(x);
  double acc = 0.0;
  for (double v : x) acc += (v - mu) * (v - mu);
  return acc / static_cast<double>(x.size());
}

double stddev(const Series& x) { return std::sqrt(variance(x)); }

double correlation(const Series& x, const Series& y) {
  if (x.size() != y.size() || x.empty()) {
    throw invalid_input_error("correlation needs equal-length non-empty series");
  }
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw degenerate_input_error("correlation undefined for constant series");
  }
  return sxy / std::sqrt(sxx * syy);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double two_sided_p(double abs_z) {
  if (std::isnan(abs_z)) return 1.0;
  if (std::isinf(abs_z)) return 1e-300;
  const double p = std::erfc(std::fabs(abs_z) / std::sqrt(2.0));
  return std::clamp(p, 1e-300, 1.0);
}

namespace {

// Regularized incomplete gamma by series expansion (x < a+1) or continued
// fraction (x >= a+1).
double gser(double a, double x) {
  const int itmax = 500;
  const double eps = std::numeric_limits<double>::epsilon();
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < itmax; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * eps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gcf(double a, double x) {
  const int itmax = 500;
  const double eps = std::numeric_limits<double>::epsilon();
  const double fpmin = std::numeric_limits<double>::min() / eps;
  double b = x + 1.0 - a;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= itmax; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gammq(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw invalid_input_error("gammq requires x >= 0, a > 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gser(a, x);
  return gcf(a, x);
}

double chi2_sf(double x, double k) { return gammq(0.5 * k, 0.5 * x); }

double quantile(Series v, double q) {
  if (v.empty()) throw invalid_input_error("quantile of empty series");
  q = std::clamp(q, 0.0, 1.0);
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

LstsqResult lstsq(const std::vector<double>& a, std::size_t nrows, std::size_t ncols,
                  const std::vector<double>& y) {
  if (a.size() != nrows * ncols || y.size() != nrows || nrows < ncols || ncols == 0) {
    throw invalid_input_error("lstsq: bad dimensions");
  }
  // Column-major working copies for Householder.
  std::vector<double> q(nrows * ncols);
  for (std::size_t r = 0; r < nrows; ++r) {
    for (std::size_t c = 0; c < ncols; ++c) q[c * nrows + r] = a[r * ncols + c];
  }
  std::vector<double> b = y;
  std::vector<double> rdiag(ncols, 0.0);

  for (std::size_t c = 0; c < ncols; ++c) {
    double* col = &q[c * nrows];
    double norm = 0.0;
    for (std::size_t r = c; r < nrows; ++r) norm += col[r] * col[r];
    norm = std::sqrt(norm);
    if (norm == 0.0) throw degenerate_input_error("lstsq: rank-deficient design matrix");
    if (col[c] > 0.0) norm = -norm;
    for (std::size_t r = c; r < nrows; ++r) col[r] /= norm;
    col[c] -= 1.0;
    rdiag[c] = norm;
    // Apply the reflector to remaining columns and to b.
    for (std::size_t c2 = c + 1; c2 < ncols; ++c2) {
      double* col2 = &q[c2 * nrows];
      double s = 0.0;
      for (std::size_t r = c; r < nrows; ++r) s += col[r] * col2[r];
      s /= col[c];
      for (std::size_t r = c; r < nrows; ++r) col2[r] += s * col[r];
    }
    double s = 0.0;
    for (std::size_t r = c; r < nrows; ++r) s += col[r] * b[r];
    s /= col[c];
    for (std::size_t r = c; r < nrows; ++r) b[r] += s * col[r];
  }

  // R sits above the reflectors: R(i,j) = q[j*nrows+i] for i<j, diag in rdiag.
  auto r_at = [&](std::size_t i, std::size_t j) -> double {
    return i == j ? rdiag[i] : q[j * nrows + i];
  };
  const double rmax = [&] {
    double m = 0.0;
    for (std::size_t i = 0; i < ncols; ++i) m = std::max(m, std::fabs(rdiag[i]));
    return m;
  }();
  for (std::size_t i = 0; i < ncols; ++i) {
    if (std::fabs(rdiag[i]) < 1e-12 * std::max(1.0, rmax)) {
      throw degenerate_input_error("lstsq: rank-deficient design matrix");
    }
  }

  LstsqResult out;
  out.coef.assign(ncols, 0.0);
  for (std::size_t ii = ncols; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t j = ii + 1; j < ncols; ++j) s -= r_at(ii, j) * out.coef[j];
    out.coef[ii] = s / rdiag[ii];
  }
  out.rss = 0.0;
  for (std::size_t r = ncols; r < nrows; ++r) out.rss += b[r] * b[r];
  out.dof = static_cast<int>(nrows - ncols);

  // (X'X)^-1 = R^-1 R^-T; diagonal entries from rows of R^-1.
  std::vector<double> rinv(ncols * ncols, 0.0);
  for (std::size_t j = 0; j < ncols; ++j) {
    rinv[j * ncols + j] = 1.0 / rdiag[j];
    for (std::size_t i = j; i-- > 0;) {
      double s = 0.0;
      for (std::size_t k = i + 1; k <= j; ++k) s += r_at(i, k) * rinv[k * ncols + j];
      rinv[i * ncols + j] = -s / rdiag[i];
    }
  }
  const double sigma2 = out.dof > 0 ? out.rss / static_cast<double>(out.dof) : 0.0;
  out.se.assign(ncols, 0.0);
  for (std::size_t i = 0; i < ncols; ++i) {
    double s = 0.0;
    for (std::size_t j = i; j < ncols; ++j) s += rinv[i * ncols + j] * rinv[i * ncols + j];
    out.se[i] = std::sqrt(sigma2 * s);
  }
  return out;
}

}  // namespace dualsig::mathutil
