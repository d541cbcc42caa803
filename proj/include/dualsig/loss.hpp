#pragma once

#include <string>

#include "dualsig/types.hpp"

namespace dualsig::loss {

/// Exact (non-smoothed) loss evaluation, component by component.
struct LossBreakdown {
  double fitting = 0.0;
  double regularization = 0.0;
  double smoothing = 0.0;
  double total = 0.0;
  std::string warning;  ///< non-empty when the (fit, reg) pair is Table-1 incompatible
};

/// Order/normalization compatibility of a fitting metric with a
/// regularization metric, encoded verbatim from the published table.
struct Compatibility {
  bool order_match = false;
  bool normalization_match = false;
  bool compatible = false;
};

double fitting_metric(const Series& x, const Series& m, FitMetricKind kind);

/// Weighted moving-range penalty on first differences; w_t multiplies the
/// difference ending at t (sum runs t = 2..T).
double regularization(const Series& m, const Series& w, RegKind kind);

/// Weighted mean absolute second difference (sum runs t = 3..T).
double smoothing(const Series& m, const Series& w);

LossBreakdown loss_mean(const Series& x, const Series& m, const Series& w, double beta,
                        double gamma, FitMetricKind fit_kind, RegKind reg_kind);

/// Dispersion loss on absolute residuals; r_abs entries must be >= 0.
LossBreakdown loss_disp(const Series& r_abs, const Series& s, const Series& w, double beta,
                        double gamma, FitMetricKind fit_kind, RegKind reg_kind);

/// Multipliers with any estimation rule already applied.
struct ResolvedParams {
  double beta_mean = 0.0;
  double beta_disp = 0.0;
  double gamma_mean = 0.0;
  double gamma_disp = 0.0;
  double theta = 0.0;
  FitMetricKind fit_kind = FitMetricKind::rmse;
  RegKind reg_kind = RegKind::mae;
};

struct JointLoss {
  LossBreakdown mean;
  LossBreakdown disp;
  double combined = 0.0;  ///< mean.total + theta * disp.total
};

JointLoss loss_joint(const Series& x, const Series& m, const Series& s, const Series& w_mean,
                     const Series& w_disp, const ResolvedParams& p);

Compatibility compatibility(FitMetricKind fit, FitMetricKind reg_as_metric);

}  // namespace dualsig::loss
