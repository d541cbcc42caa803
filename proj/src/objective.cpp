#include <cmath>
#include <utility>

#include "dualsig/kernels.hpp"
#include "dualsig/optimizer.hpp"

namespace dualsig::opt {

namespace {

double softplus(double u) { return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u)); }

double sigmoid(double u) {
  if (u >= 0.0) {
    const double e = std::exp(-u);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(u);
  return e / (1.0 + e);
}

}  // namespace

double smooth_abs(double v, double delta) {
  if (delta <= 0.0) throw config_error("smooth_abs requires delta > 0");
  const double r = v / delta;
  return delta * (std::sqrt(1.0 + r * r) - 1.0);
}

double smooth_abs_grad(double v, double delta) { return v / std::sqrt(v * v + delta * delta); }

SmoothedObjective::SmoothedObjective(Stage stage, Series x, Series w_mean, Series w_disp,
                                     loss::ResolvedParams params, double huber_delta,
                                     double s_floor, double scale, bool parallel)
    : stage_(stage),
      x_(std::move(x)),
      w_mean_(std::move(w_mean)),
      w_disp_(std::move(w_disp)),
      p_(params),
      delta_(huber_delta),
      s_floor_(s_floor),
      sqrt_eps_(1e-9 * scale * (1e-9 * scale)),
      parallel_(parallel) {
  if (x_.size() < 3) throw invalid_input_error("objective needs T >= 3");
  if (w_mean_.size() != x_.size() || w_disp_.size() != x_.size()) {
    throw invalid_input_error("objective: weight series length mismatch");
  }
  if (delta_ <= 0.0 || s_floor_ <= 0.0) {
    throw config_error("objective requires huber_delta > 0 and s_floor > 0");
  }
  if (p_.fit_kind == FitMetricKind::maxse || p_.fit_kind == FitMetricKind::maxae) {
    throw config_error("optimizer supports rmse/mse/mae/sse fitting only; " +
                       to_string(p_.fit_kind) + " is evaluation-only");
  }
  const std::size_t t = x_.size();
  buf_m_.resize(t);
  buf_s_.resize(t);
  buf_a_.resize(t);
  buf_d1_.resize(t);
  buf_d2_.resize(t);
  buf_e_.resize(t);
}

void SmoothedObjective::set_disp_target(Series r_abs) {
  if (r_abs.size() != x_.size()) throw invalid_input_error("disp target length mismatch");
  target_abs_ = std::move(r_abs);
}

std::size_t SmoothedObjective::dim() const {
  return stage_ == Stage::joint ? 2 * x_.size() : x_.size();
}

double SmoothedObjective::disp_at(double u) const { return softplus(u) + s_floor_; }

double SmoothedObjective::disp_inverse(double s) const {
  const double y = std::max(s - s_floor_, 1e-300);
  return y > 30.0 ? y : std::log(std::expm1(y));
}

Series SmoothedObjective::mean_of(const Series& z) const {
  return Series(z.begin(), z.begin() + static_cast<long>(x_.size()));
}

Series SmoothedObjective::disp_of(const Series& z) const {
  const std::size_t t = x_.size();
  const std::size_t off = stage_ == Stage::joint ? t : 0;
  Series s(t);
  for (std::size_t i = 0; i < t; ++i) s[i] = disp_at(z[off + i]);
  return s;
}

double SmoothedObjective::eval(const Series& z, Series* grad) const {
  const std::size_t t = x_.size();
  if (z.size() != dim()) throw invalid_input_error("objective: wrong variable count");
  const bool has_mean = stage_ != Stage::disp_only;
  const bool has_disp = stage_ != Stage::mean_only;
  const double* m = has_mean ? z.data() : nullptr;
  const double* u = has_disp ? z.data() + (stage_ == Stage::joint ? t : 0) : nullptr;
  const double tn = static_cast<double>(t);
  const double tn1 = static_cast<double>(t - 1);
  const double tn2 = static_cast<double>(t - 2);

  if (grad != nullptr) {
    grad->assign(dim(), 0.0);
  }

  double total = 0.0;
  // Mean-stage pieces reused by the dispersion target in joint mode.
  if (has_mean) {
    double fit = 0.0;
    double dfit_scale = 0.0;  // common factor for rmse gradient
    switch (p_.fit_kind) {
      case FitMetricKind::rmse: {
        const double q =
            kern::sum_blocked(
                t, [&](std::size_t i) { return (x_[i] - m[i]) * (x_[i] - m[i]); }, parallel_) /
            tn;
        fit = std::sqrt(q + sqrt_eps_);
        dfit_scale = 1.0 / (tn * fit);
        break;
      }
      case FitMetricKind::mse:
        fit = kern::sum_blocked(
                  t, [&](std::size_t i) { return (x_[i] - m[i]) * (x_[i] - m[i]); }, parallel_) /
              tn;
        break;
      case FitMetricKind::sse:
        fit = kern::sum_blocked(
            t, [&](std::size_t i) { return (x_[i] - m[i]) * (x_[i] - m[i]); }, parallel_);
        break;
      case FitMetricKind::mae:
        fit = kern::sum_blocked(
                  t, [&](std::size_t i) { return smooth_abs(x_[i] - m[i], delta_); }, parallel_) /
              tn;
        break;
      default:
        break;
    }

    double reg = 0.0;
    double reg_scale = 0.0;  // rmse form: 1 / ((T-1) * reg)
    if (p_.reg_kind == RegKind::mae) {
      reg = kern::sum_blocked(
                t - 1,
                [&](std::size_t j) { return w_mean_[j + 1] * smooth_abs(m[j + 1] - m[j], delta_); },
                parallel_) /
            tn1;
    } else {
      const double qr = kern::sum_blocked(
                            t - 1,
                            [&](std::size_t j) {
                              const double d = m[j + 1] - m[j];
                              return w_mean_[j + 1] * d * d;
                            },
                            parallel_) /
                        tn1;
      reg = std::sqrt(qr + sqrt_eps_);
      reg_scale = 1.0 / (tn1 * reg);
    }

    const double smo = kern::sum_blocked(
                           t - 2,
                           [&](std::size_t j) {
                             const double c = m[j + 2] - 2.0 * m[j + 1] + m[j];
                             return w_mean_[j + 2] * smooth_abs(c, delta_);
                           },
                           parallel_) /
                       tn2;

    total += fit + p_.beta_mean * reg + p_.gamma_mean * smo;

    if (grad != nullptr) {
      // buf_d1_[j] holds the reg term factor for difference j (1-based end),
      // buf_d2_[j] the smoothing factor for curvature ending at j.
      double* d1 = buf_d1_.data();
      double* d2 = buf_d2_.data();
      kern::fill(
          t, d1,
          [&](std::size_t j) {
            if (j == 0) return 0.0;
            const double d = m[j] - m[j - 1];
            return p_.reg_kind == RegKind::mae ? w_mean_[j] * smooth_abs_grad(d, delta_)
                                               : w_mean_[j] * d;
          },
          parallel_);
      kern::fill(
          t, d2,
          [&](std::size_t j) {
            if (j < 2) return 0.0;
            const double c = m[j] - 2.0 * m[j - 1] + m[j - 2];
            return w_mean_[j] * smooth_abs_grad(c, delta_);
          },
          parallel_);
      const double reg_factor =
          p_.reg_kind == RegKind::mae ? p_.beta_mean / tn1 : p_.beta_mean * reg_scale;
      double* g = grad->data();
      kern::fill(
          t, g,
          [&](std::size_t i) {
            double dfit;
            switch (p_.fit_kind) {
              case FitMetricKind::rmse: dfit = (m[i] - x_[i]) * dfit_scale; break;
              case FitMetricKind::mse: dfit = 2.0 * (m[i] - x_[i]) / tn; break;
              case FitMetricKind::sse: dfit = 2.0 * (m[i] - x_[i]); break;
              default: dfit = smooth_abs_grad(m[i] - x_[i], delta_) / tn; break;
            }
            double dreg = d1[i];
            if (i + 1 < t) dreg -= d1[i + 1];
            double dsmo = d2[i];
            if (i + 1 < t) dsmo -= 2.0 * d2[i + 1];
            if (i + 2 < t) dsmo += d2[i + 2];
            return dfit + reg_factor * dreg + p_.gamma_mean * dsmo / tn2;
          },
          parallel_);
    }
  }

  if (has_disp) {
    double* s = buf_s_.data();
    const double* a = buf_a_.data();
    kern::fill(t, s, [&](std::size_t i) { return softplus(u[i]) + s_floor_; }, parallel_);
    if (stage_ == Stage::joint) {
      kern::fill(
          t, buf_a_.data(), [&](std::size_t i) { return smooth_abs(x_[i] - m[i], delta_); },
          parallel_);
    } else {
      if (target_abs_.size() != t) {
        throw invalid_input_error("disp_only objective requires a target (set_disp_target)");
      }
      a = target_abs_.data();
    }

    double fit = 0.0;
    double dfit_scale = 0.0;
    switch (p_.fit_kind) {
      case FitMetricKind::rmse: {
        const double q = kern::sum_blocked(
                             t, [&](std::size_t i) { return (a[i] - s[i]) * (a[i] - s[i]); },
                             parallel_) /
                         tn;
        fit = std::sqrt(q + sqrt_eps_);
        dfit_scale = 1.0 / (tn * fit);
        break;
      }
      case FitMetricKind::mse:
        fit = kern::sum_blocked(
                  t, [&](std::size_t i) { return (a[i] - s[i]) * (a[i] - s[i]); }, parallel_) /
              tn;
        break;
      case FitMetricKind::sse:
        fit = kern::sum_blocked(
            t, [&](std::size_t i) { return (a[i] - s[i]) * (a[i] - s[i]); }, parallel_);
        break;
      case FitMetricKind::mae:
        fit = kern::sum_blocked(
                  t, [&](std::size_t i) { return smooth_abs(a[i] - s[i], delta_); }, parallel_) /
              tn;
        break;
      default:
        break;
    }

    double reg = 0.0;
    double reg_scale = 0.0;
    if (p_.reg_kind == RegKind::mae) {
      reg = kern::sum_blocked(
                t - 1,
                [&](std::size_t j) { return w_disp_[j + 1] * smooth_abs(s[j + 1] - s[j], delta_); },
                parallel_) /
            tn1;
    } else {
      const double qr = kern::sum_blocked(
                            t - 1,
                            [&](std::size_t j) {
                              const double d = s[j + 1] - s[j];
                              return w_disp_[j + 1] * d * d;
                            },
                            parallel_) /
                        tn1;
      reg = std::sqrt(qr + sqrt_eps_);
      reg_scale = 1.0 / (tn1 * reg);
    }

    const double smo = kern::sum_blocked(
                           t - 2,
                           [&](std::size_t j) {
                             const double c = s[j + 2] - 2.0 * s[j + 1] + s[j];
                             return w_disp_[j + 2] * smooth_abs(c, delta_);
                           },
                           parallel_) /
                       tn2;

    const double stage_loss = fit + p_.beta_disp * reg + p_.gamma_disp * smo;
    const double stage_mult = stage_ == Stage::joint ? p_.theta : 1.0;
    total += stage_mult * stage_loss;

    if (grad != nullptr) {
      double* d1 = buf_d1_.data();
      double* d2 = buf_d2_.data();
      double* e = buf_e_.data();
      kern::fill(
          t, d1,
          [&](std::size_t j) {
            if (j == 0) return 0.0;
            const double d = s[j] - s[j - 1];
            return p_.reg_kind == RegKind::mae ? w_disp_[j] * smooth_abs_grad(d, delta_)
                                               : w_disp_[j] * d;
          },
          parallel_);
      kern::fill(
          t, d2,
          [&](std::size_t j) {
            if (j < 2) return 0.0;
            const double c = s[j] - 2.0 * s[j - 1] + s[j - 2];
            return w_disp_[j] * smooth_abs_grad(c, delta_);
          },
          parallel_);
      // e[i] = d(fit)/d(a_i - s_i) pairing: derivative wrt s is -e, wrt a is +e.
      kern::fill(
          t, e,
          [&](std::size_t i) {
            switch (p_.fit_kind) {
              case FitMetricKind::rmse: return (a[i] - s[i]) * dfit_scale;
              case FitMetricKind::mse: return 2.0 * (a[i] - s[i]) / tn;
              case FitMetricKind::sse: return 2.0 * (a[i] - s[i]);
              default: return smooth_abs_grad(a[i] - s[i], delta_) / tn;
            }
          },
          parallel_);
      const double reg_factor =
          p_.reg_kind == RegKind::mae ? p_.beta_disp / tn1 : p_.beta_disp * reg_scale;
      const std::size_t off = stage_ == Stage::joint ? t : 0;
      double* g = grad->data();
      kern::fill(
          t, g + off,
          [&](std::size_t i) {
            double dreg = d1[i];
            if (i + 1 < t) dreg -= d1[i + 1];
            double dsmo = d2[i];
            if (i + 1 < t) dsmo -= 2.0 * d2[i + 1];
            if (i + 2 < t) dsmo += d2[i + 2];
            const double ds = -e[i] + reg_factor * dreg + p_.gamma_disp * dsmo / tn2;
            return stage_mult * ds * sigmoid(u[i]);
          },
          parallel_);
      if (stage_ == Stage::joint) {
        // Dispersion fitting reaches the mean through a = smooth|x - m|.
        kern::fill(
            t, g,
            [&](std::size_t i) {
              return g[i] - stage_mult * e[i] * smooth_abs_grad(x_[i] - m[i], delta_);
            },
            parallel_);
      }
    }
  }
  return total;
}

}  // namespace dualsig::opt
