#include "dualsig/synth.hpp"

#include <cmath>
#include <numbers>

namespace dualsig::synth {

namespace {

void check_window(int t_start, int t_end, int length, const char* what) {
  if (t_start < 1 || t_end > length || t_start > t_end) {
    throw invalid_input_error(std::string(what) + " window [" + std::to_string(t_start) + ", " +
                              std::to_string(t_end) + "] outside series of length " +
                              std::to_string(length));
  }
}

void check_point(int t, int length, const char* what) {
  if (t < 1 || t > length) {
    throw invalid_input_error(std::string(what) + " at t=" + std::to_string(t) +
                              " outside series of length " + std::to_string(length));
  }
}

}  // namespace

void ScenarioSpec::validate() const {
  if (length < 3) throw invalid_input_error("scenario length must be >= 3");
  if (base_sigma <= 0.0) throw invalid_input_error("base_sigma must be > 0");
  for (const Effect& e : effects) {
    std::visit(
        [&](const auto& eff) {
          using E = std::decay_t<decltype(eff)>;
          if constexpr (std::is_same_v<E, Outlier>) {
            check_point(eff.t, length, "outlier");
          } else if constexpr (std::is_same_v<E, MeanShift>) {
            check_point(eff.t_start, length, "mean_shift");
          } else if constexpr (std::is_same_v<E, LinearTrend>) {
            check_window(eff.t_start, eff.t_end, length, "linear_trend");
          } else if constexpr (std::is_same_v<E, Cycle>) {
            check_window(eff.t_start, eff.t_end, length, "cycle");
            if (eff.period <= 0.0) throw invalid_input_error("cycle period must be > 0");
          } else if constexpr (std::is_same_v<E, VarianceShift>) {
            check_point(eff.t_start, length, "variance_shift");
            if (eff.factor <= 0.0) throw invalid_input_error("variance factor must be > 0");
          } else {
            check_window(eff.t_start, eff.t_end, length, "variance_trend");
            if (eff.factor_end <= 0.0) throw invalid_input_error("variance factor must be > 0");
          }
        },
        e);
  }
}

GaussianSource::GaussianSource(std::uint64_t seed) : rng_(seed) {}

double GaussianSource::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 53-bit mantissa draws; u1 in (0, 1] so the log is finite.
  const double u1 =
      (static_cast<double>(rng_() >> 11) + 1.0) * (1.0 / 9007199254740992.0);
  const double u2 = static_cast<double>(rng_() >> 11) * (1.0 / 9007199254740992.0);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(angle);
  has_spare_ = true;
  return r * std::cos(angle);
}

SyntheticSeries generate(const ScenarioSpec& spec) {
  spec.validate();
  const std::size_t t_count = static_cast<std::size_t>(spec.length);
  Series mean(t_count, spec.base_mean);
  Series disp(t_count, spec.base_sigma);

  for (const Effect& e : spec.effects) {
    std::visit(
        [&](const auto& eff) {
          using E = std::decay_t<decltype(eff)>;
          if constexpr (std::is_same_v<E, Outlier>) {
            mean[eff.t - 1] += eff.magnitude;
          } else if constexpr (std::is_same_v<E, MeanShift>) {
            for (std::size_t i = static_cast<std::size_t>(eff.t_start) - 1; i < t_count; ++i) {
              mean[i] += eff.delta;
            }
          } else if constexpr (std::is_same_v<E, LinearTrend>) {
            for (std::size_t i = static_cast<std::size_t>(eff.t_start) - 1; i < t_count; ++i) {
              const int t = static_cast<int>(i) + 1;
              const int clamped = std::min(t, eff.t_end);
              mean[i] += eff.slope * static_cast<double>(clamped - eff.t_start);
            }
          } else if constexpr (std::is_same_v<E, Cycle>) {
            for (int t = eff.t_start; t <= eff.t_end; ++t) {
              mean[t - 1] += eff.amplitude *
                             std::sin(2.0 * std::numbers::pi *
                                      static_cast<double>(t - eff.t_start) / eff.period);
            }
          } else if constexpr (std::is_same_v<E, VarianceShift>) {
            for (std::size_t i = static_cast<std::size_t>(eff.t_start) - 1; i < t_count; ++i) {
              disp[i] *= eff.factor;
            }
          } else {
            for (std::size_t i = static_cast<std::size_t>(eff.t_start) - 1; i < t_count; ++i) {
              const int t = static_cast<int>(i) + 1;
              const int clamped = std::min(t, eff.t_end);
              const double frac = static_cast<double>(clamped - eff.t_start) /
                                  static_cast<double>(std::max(1, eff.t_end - eff.t_start));
              disp[i] *= 1.0 + frac * (eff.factor_end - 1.0);
            }
          }
        },
        e);
  }

  GaussianSource gauss(spec.seed);
  Series noise(t_count);
  Series x(t_count);
  for (std::size_t i = 0; i < t_count; ++i) {
    noise[i] = gauss.next();
    x[i] = mean[i] + disp[i] * noise[i];
  }
  return SyntheticSeries{TimeSeries(std::move(x)), std::move(mean), std::move(disp),
                         std::move(noise)};
}

std::map<std::string, ScenarioSpec> paper_scenarios() {
  std::map<std::string, ScenarioSpec> out;
  ScenarioSpec base;
  base.length = 200;
  base.base_mean = 10.0;
  base.base_sigma = 1.0;

  ScenarioSpec s = base;
  s.effects = {Outlier{100, 5.0}};
  out["outlier"] = s;

  s = base;
  s.effects = {MeanShift{101, 5.0}};
  out["mean-shift"] = s;

  s = base;
  s.effects = {Cycle{41, 160, 2.0, 20.0}};
  out["cycle"] = s;

  s = base;
  s.effects = {LinearTrend{101, 200, 0.05}};
  out["steady-then-trend"] = s;

  s = base;
  s.effects = {VarianceShift{101, 3.0}};
  out["variance-shift"] = s;

  s = base;
  s.effects = {VarianceTrend{101, 200, 3.0}};
  out["variance-trend"] = s;

  s = base;
  s.effects = {Outlier{25, 5.0}, MeanShift{60, 4.0}, LinearTrend{100, 140, 0.08},
               VarianceShift{110, 2.0}, Cycle{150, 190, 2.0, 20.0}};
  out["composite"] = s;
  return out;
}

}  // namespace dualsig::synth
