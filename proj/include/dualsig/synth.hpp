#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "dualsig/types.hpp"

namespace dualsig::synth {

/// PRNG and transform identity stamped into generated outputs.
inline constexpr const char* generator_id = "mt19937_64/box-muller/v1";

// Effect times are 1-based and inclusive, matching report conventions.
struct Outlier {
  int t = 1;
  double magnitude = 0.0;
};
struct MeanShift {
  int t_start = 1;
  double delta = 0.0;
};
struct LinearTrend {  // ramp over [t_start, t_end], holds its final level after
  int t_start = 1;
  int t_end = 1;
  double slope = 0.0;
};
struct Cycle {
  int t_start = 1;
  int t_end = 1;
  double amplitude = 0.0;
  double period = 2.0;
};
struct VarianceShift {
  int t_start = 1;
  double factor = 1.0;
};
struct VarianceTrend {  // dispersion factor ramps 1 -> factor_end, then holds
  int t_start = 1;
  int t_end = 1;
  double factor_end = 1.0;
};

using Effect = std::variant<Outlier, MeanShift, LinearTrend, Cycle, VarianceShift, VarianceTrend>;

struct ScenarioSpec {
  int length = 200;
  double base_mean = 0.0;
  double base_sigma = 1.0;
  std::vector<Effect> effects;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticSeries {
  TimeSeries x;
  Series true_mean;
  Series true_disp;
  Series true_noise;
};

/// Deterministic N(0,1) stream: Box-Muller over mt19937_64. Implementation
/// is pinned (no std::normal_distribution) so identical seeds give identical
/// streams across platforms.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed);
  double next();

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

SyntheticSeries generate(const ScenarioSpec& spec);

/// The canonical seven scenarios (outlier, mean-shift, cycle,
/// steady-then-trend, variance-shift, variance-trend, composite), all T=200
/// on an N(10,1) base.
std::map<std::string, ScenarioSpec> paper_scenarios();

}  // namespace dualsig::synth
