#include "dualsig/loss.hpp"

#include <algorithm>
#include <cmath>

namespace dualsig::loss {

namespace {

void require_same_length(const Series& a, const Series& b, const char* what) {
  if (a.size() != b.size()) {
    throw invalid_input_error(std::string(what) + ": series lengths differ (" +
                              std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
}

std::string pair_warning(FitMetricKind fit, RegKind reg) {
  const FitMetricKind reg_metric = reg == RegKind::mae ? FitMetricKind::mae : FitMetricKind::rmse;
  const Compatibility c = compatibility(fit, reg_metric);
  if (c.compatible) return {};
  return "fitting " + to_string(fit) + " and regularization " + to_string(reg_metric) +
         " differ in " + (!c.order_match ? std::string("order") : std::string("")) +
         (!c.order_match && !c.normalization_match ? " and " : "") +
         (!c.normalization_match ? std::string("normalization") : std::string(""));
}

}  // namespace

double fitting_metric(const Series& x, const Series& m, FitMetricKind kind) {
  require_same_length(x, m, "fitting_metric");
  if (x.empty()) throw invalid_input_error("fitting_metric: empty series");
  const double n = static_cast<double>(x.size());
  double acc = 0.0;
  switch (kind) {
    case FitMetricKind::rmse:
    case FitMetricKind::mse:
    case FitMetricKind::sse:
      for (std::size_t i = 0; i < x.size(); ++i) acc += (x[i] - m[i]) * (x[i] - m[i]);
      if (kind == FitMetricKind::sse) return acc;
      return kind == FitMetricKind::mse ? acc / n : std::sqrt(acc / n);
    case FitMetricKind::mae:
      for (std::size_t i = 0; i < x.size(); ++i) acc += std::fabs(x[i] - m[i]);
      return acc / n;
    case FitMetricKind::maxse:
      for (std::size_t i = 0; i < x.size(); ++i) {
        acc = std::max(acc, (x[i] - m[i]) * (x[i] - m[i]));
      }
      return acc;
    case FitMetricKind::maxae:
      for (std::size_t i = 0; i < x.size(); ++i) acc = std::max(acc, std::fabs(x[i] - m[i]));
      return acc;
  }
  throw config_error("unknown fitting metric");
}

double regularization(const Series& m, const Series& w, RegKind kind) {
  if (m.size() < 2) throw invalid_input_error("regularization needs T >= 2");
  require_same_length(m, w, "regularization");
  const double n1 = static_cast<double>(m.size() - 1);
  double acc = 0.0;
  if (kind == RegKind::mae) {
    for (std::size_t t = 1; t < m.size(); ++t) acc += w[t] * std::fabs(m[t] - m[t - 1]);
    return acc / n1;
  }
  for (std::size_t t = 1; t < m.size(); ++t) acc += w[t] * (m[t] - m[t - 1]) * (m[t] - m[t - 1]);
  return std::sqrt(acc / n1);
}

double smoothing(const Series& m, const Series& w) {
  if (m.size() < 3) throw invalid_input_error("smoothing needs T >= 3");
  require_same_length(m, w, "smoothing");
  const double n2 = static_cast<double>(m.size() - 2);
  double acc = 0.0;
  for (std::size_t t = 2; t < m.size(); ++t) {
    acc += w[t] * std::fabs(m[t] - 2.0 * m[t - 1] + m[t - 2]);
  }
  return acc / n2;
}

LossBreakdown loss_mean(const Series& x, const Series& m, const Series& w, double beta,
                        double gamma, FitMetricKind fit_kind, RegKind reg_kind) {
  require_same_length(x, m, "loss_mean");
  if (x.size() < 3) throw invalid_input_error("loss_mean needs T >= 3");
  LossBreakdown out;
  out.fitting = fitting_metric(x, m, fit_kind);
  out.regularization = regularization(m, w, reg_kind);
  out.smoothing = smoothing(m, w);
  out.total = out.fitting + beta * out.regularization + gamma * out.smoothing;
  out.warning = pair_warning(fit_kind, reg_kind);
  return out;
}

LossBreakdown loss_disp(const Series& r_abs, const Series& s, const Series& w, double beta,
                        double gamma, FitMetricKind fit_kind, RegKind reg_kind) {
  require_same_length(r_abs, s, "loss_disp");
  if (r_abs.size() < 3) throw invalid_input_error("loss_disp needs T >= 3");
  for (std::size_t i = 0; i < r_abs.size(); ++i) {
    if (r_abs[i] < 0.0) {
      throw invalid_input_error("loss_disp: residual magnitudes must be >= 0, got " +
                                std::to_string(r_abs[i]) + " at t=" + std::to_string(i + 1));
    }
  }
  LossBreakdown out;
  out.fitting = fitting_metric(r_abs, s, fit_kind);
  out.regularization = regularization(s, w, reg_kind);
  out.smoothing = smoothing(s, w);
  out.total = out.fitting + beta * out.regularization + gamma * out.smoothing;
  out.warning = pair_warning(fit_kind, reg_kind);
  return out;
}

JointLoss loss_joint(const Series& x, const Series& m, const Series& s, const Series& w_mean,
                     const Series& w_disp, const ResolvedParams& p) {
  JointLoss out;
  out.mean = loss_mean(x, m, w_mean, p.beta_mean, p.gamma_mean, p.fit_kind, p.reg_kind);
  Series r_abs(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r_abs[i] = std::fabs(x[i] - m[i]);
  out.disp = loss_disp(r_abs, s, w_disp, p.beta_disp, p.gamma_disp, p.fit_kind, p.reg_kind);
  out.combined = out.mean.total + p.theta * out.disp.total;
  return out;
}

Compatibility compatibility(FitMetricKind fit, FitMetricKind reg_as_metric) {
  // Published pairwise chart, lower triangle; O = order, N = normalization.
  // Indices follow FitMetricKind: rmse, mse, mae, sse, maxse, maxae.
  static constexpr bool order[6][6] = {
      // rmse  mse    mae    sse    maxse  maxae
      {true, false, true, false, false, true},    // rmse
      {false, true, false, true, true, false},    // mse
      {true, false, true, false, false, true},    // mae
      {false, true, false, true, true, false},    // sse
      {false, true, false, true, true, false},    // maxse
      {true, false, true, false, false, true},    // maxae
  };
  static constexpr bool norm[6][6] = {
      {true, false, false, false, true, true},    // rmse
      {false, true, true, false, true, true},     // mse
      {false, true, true, false, true, true},     // mae
      {false, false, false, true, false, false},  // sse
      {true, true, true, false, true, true},      // maxse
      {true, true, true, false, true, true},      // maxae
  };
  const auto i = static_cast<std::size_t>(fit);
  const auto j = static_cast<std::size_t>(reg_as_metric);
  Compatibility c;
  c.order_match = order[i][j];
  c.normalization_match = norm[i][j];
  c.compatible = c.order_match && c.normalization_match;
  return c;
}

}  // namespace dualsig::loss
