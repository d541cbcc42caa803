#include "dualsig/dualspace.hpp"

#include <algorithm>
#include <cmath>

#include "dualsig/kernels.hpp"
#include "dualsig/mathutil.hpp"

namespace dualsig::dualspace {

namespace {

std::size_t cell_of(double v, const std::vector<double>& edges) {
  const std::size_t n = edges.size() - 1;
  if (v <= edges.front()) return 0;
  if (v >= edges.back()) return n - 1;
  const auto it = std::upper_bound(edges.begin(), edges.end(), v);
  const std::size_t idx = static_cast<std::size_t>(it - edges.begin()) - 1;
  return std::min(idx, n - 1);
}

double center(const std::vector<double>& edges, std::size_t i) {
  return 0.5 * (edges[i] + edges[i + 1]);
}

}  // namespace

std::vector<StatePoint> states(const DualSignal& signal) {
  std::vector<StatePoint> out(signal.size());
  for (std::size_t i = 0; i < signal.size(); ++i) {
    out[i] = StatePoint{signal.mean()[i], signal.dispersion()[i], i};
  }
  return out;
}

DensityGrid density_grid(const std::vector<StatePoint>& points, std::size_t nm, std::size_t ns,
                         double bandwidth_m, double bandwidth_s, bool parallel) {
  if (points.size() < 2) throw invalid_input_error("density_grid needs at least 2 points");
  if (nm < 2 || ns < 2) throw invalid_input_error("density_grid needs nm, ns >= 2");

  Series ms(points.size()), ss(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    ms[i] = points[i].m;
    ss[i] = points[i].s;
  }
  const double sd_m = mathutil::stddev(ms);
  const double sd_s = mathutil::stddev(ss);
  if (sd_m == 0.0 && sd_s == 0.0) {
    throw degenerate_input_error("density_grid: all points identical (zero bandwidth)");
  }
  const double n_factor = std::pow(static_cast<double>(points.size()), -0.2);
  auto silverman = [&](double sd, double fallback_scale) {
    if (sd > 0.0) return 1.06 * sd * n_factor;
    return std::max(1e-9, 1e-9 * std::fabs(fallback_scale));
  };
  DensityGrid grid;
  grid.bandwidth_m = bandwidth_m > 0.0 ? bandwidth_m : silverman(sd_m, mathutil::mean(ms));
  grid.bandwidth_s = bandwidth_s > 0.0 ? bandwidth_s : silverman(sd_s, mathutil::mean(ss));

  const auto [m_lo, m_hi] = std::minmax_element(ms.begin(), ms.end());
  const auto [s_lo, s_hi] = std::minmax_element(ss.begin(), ss.end());
  const double mlo = *m_lo - 3.0 * grid.bandwidth_m;
  const double mhi = *m_hi + 3.0 * grid.bandwidth_m;
  const double slo = *s_lo - 3.0 * grid.bandwidth_s;
  const double shi = *s_hi + 3.0 * grid.bandwidth_s;
  grid.m_edges.resize(nm + 1);
  grid.s_edges.resize(ns + 1);
  for (std::size_t i = 0; i <= nm; ++i) {
    grid.m_edges[i] = mlo + (mhi - mlo) * static_cast<double>(i) / static_cast<double>(nm);
  }
  for (std::size_t j = 0; j <= ns; ++j) {
    grid.s_edges[j] = slo + (shi - slo) * static_cast<double>(j) / static_cast<double>(ns);
  }

  grid.cells.assign(nm * ns, 0.0);
  const double inv_bm = 1.0 / grid.bandwidth_m;
  const double inv_bs = 1.0 / grid.bandwidth_s;
  kern::fill(
      nm * ns, grid.cells.data(),
      [&](std::size_t c) {
        const std::size_t im = c / ns;
        const std::size_t is = c % ns;
        const double cm = center(grid.m_edges, im);
        const double cs = center(grid.s_edges, is);
        double acc = 0.0;
        for (const StatePoint& p : points) {
          const double zm = (cm - p.m) * inv_bm;
          const double zs = (cs - p.s) * inv_bs;
          acc += std::exp(-0.5 * (zm * zm + zs * zs));
        }
        return acc;
      },
      parallel);
  double total = 0.0;
  for (double v : grid.cells) total += v;
  if (total <= 0.0) throw degenerate_input_error("density_grid: zero total mass");
  for (double& v : grid.cells) v /= total;
  return grid;
}

std::vector<Transition> transitions(const std::vector<StatePoint>& points) {
  if (points.size() < 2) throw invalid_input_error("transitions need at least 2 points");
  std::vector<Transition> out(points.size() - 1);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    out[i] = Transition{i, points[i + 1].m - points[i].m, points[i + 1].s - points[i].s};
  }
  return out;
}

VectorField vector_field(const std::vector<Transition>& edges,
                         const std::vector<StatePoint>& points, const DensityGrid& grid,
                         double idw_power) {
  if (edges.empty()) throw invalid_input_error("vector_field needs at least 1 edge");
  if (idw_power <= 0.0) throw config_error("idw_power must be > 0");
  VectorField f;
  f.m_edges = grid.m_edges;
  f.s_edges = grid.s_edges;
  const std::size_t nm = f.nm(), ns = f.ns();
  f.dm.assign(nm * ns, 0.0);
  f.ds.assign(nm * ns, 0.0);
  f.support.assign(nm * ns, 0);
  f.interpolated.assign(nm * ns, 0);

  for (const Transition& e : edges) {
    const StatePoint& origin = points[e.t];
    const std::size_t c = cell_of(origin.m, f.m_edges) * ns + cell_of(origin.s, f.s_edges);
    f.dm[c] += e.dm;
    f.ds[c] += e.ds;
    f.support[c] += 1;
  }
  std::vector<std::size_t> supported;
  for (std::size_t c = 0; c < nm * ns; ++c) {
    if (f.support[c] > 0) {
      f.dm[c] /= f.support[c];
      f.ds[c] /= f.support[c];
      supported.push_back(c);
    }
  }
  // Inverse-distance fill of empty cells, distances in cell-index units so
  // the two axes weigh equally.
  for (std::size_t c = 0; c < nm * ns; ++c) {
    if (f.support[c] > 0) continue;
    f.interpolated[c] = 1;
    const double ci = static_cast<double>(c / ns);
    const double cj = static_cast<double>(c % ns);
    double wsum = 0.0, dm = 0.0, ds = 0.0;
    for (std::size_t sc : supported) {
      const double di = static_cast<double>(sc / ns) - ci;
      const double dj = static_cast<double>(sc % ns) - cj;
      const double w = 1.0 / std::pow(std::sqrt(di * di + dj * dj), idw_power);
      wsum += w;
      dm += w * f.dm[sc];
      ds += w * f.ds[sc];
    }
    f.dm[c] = dm / wsum;
    f.ds[c] = ds / wsum;
  }
  return f;
}

namespace {

// Bilinear interpolation between cell centers; clamped to the edge cells
// outside the center lattice.
void axis_locate(const std::vector<double>& edges, double v, std::size_t& i0, double& frac) {
  const std::size_t n = edges.size() - 1;
  const double first = center(edges, 0);
  const double last = center(edges, n - 1);
  if (v <= first || n == 1) {
    i0 = 0;
    frac = 0.0;
    return;
  }
  if (v >= last) {
    i0 = n - 2;
    frac = 1.0;
    return;
  }
  std::size_t i = cell_of(v, edges);
  if (v < center(edges, i) && i > 0) --i;
  i0 = std::min(i, n - 2);
  frac = (v - center(edges, i0)) / (center(edges, i0 + 1) - center(edges, i0));
}

}  // namespace

std::vector<StatePoint> forecast_next(const StatePoint& current, const VectorField& field,
                                      const DensityGrid& density, std::size_t steps) {
  if (field.m_edges != density.m_edges || field.s_edges != density.s_edges) {
    throw invalid_input_error("forecast_next: field and density grids differ");
  }
  if (current.m < field.m_edges.front() || current.m > field.m_edges.back() ||
      current.s < field.s_edges.front() || current.s > field.s_edges.back()) {
    throw out_of_domain_error("forecast_next: starting point outside the grid");
  }
  std::vector<StatePoint> out;
  out.reserve(steps);
  const std::size_t ns = field.ns();
  double m = current.m, s = current.s;
  for (std::size_t k = 0; k < steps; ++k) {
    const double mq = std::clamp(m, field.m_edges.front(), field.m_edges.back());
    const double sq = std::clamp(s, field.s_edges.front(), field.s_edges.back());
    std::size_t im, is;
    double fm, fs;
    axis_locate(field.m_edges, mq, im, fm);
    axis_locate(field.s_edges, sq, is, fs);
    auto lerp2 = [&](const std::vector<double>& v) {
      const double v00 = v[im * ns + is];
      const double v10 = v[(im + 1) * ns + is];
      const double v01 = v[im * ns + is + 1];
      const double v11 = v[(im + 1) * ns + is + 1];
      return (1.0 - fm) * ((1.0 - fs) * v00 + fs * v01) + fm * ((1.0 - fs) * v10 + fs * v11);
    };
    m += lerp2(field.dm);
    s = std::max(0.0, s + lerp2(field.ds));
    out.push_back(StatePoint{m, s, current.t + k + 1});
  }
  return out;
}

double mutual_information(const Series& m, const Series& s, std::size_t bins) {
  if (m.size() != s.size() || m.empty()) {
    throw invalid_input_error("mutual_information needs equal-length non-empty series");
  }
  if (bins < 2) throw config_error("mutual_information needs bins >= 2");
  auto edges_of = [&](const Series& v) {
    Series sorted = v;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back()) {
      throw degenerate_input_error("mutual_information undefined for constant series");
    }
    Series edges(bins - 1);
    for (std::size_t b = 1; b < bins; ++b) {
      edges[b - 1] = mathutil::quantile(sorted, static_cast<double>(b) / static_cast<double>(bins));
    }
    return edges;
  };
  const Series em = edges_of(m), es = edges_of(s);
  auto bin_of = [&](const Series& edges, double v) {
    return static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), v) -
                                    edges.begin());
  };
  std::vector<double> joint(bins * bins, 0.0), pm(bins, 0.0), ps(bins, 0.0);
  const double n = static_cast<double>(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const std::size_t bm = bin_of(em, m[i]);
    const std::size_t bs = bin_of(es, s[i]);
    joint[bm * bins + bs] += 1.0;
    pm[bm] += 1.0;
    ps[bs] += 1.0;
  }
  double mi = 0.0;
  for (std::size_t i = 0; i < bins; ++i) {
    for (std::size_t j = 0; j < bins; ++j) {
      const double nij = joint[i * bins + j];
      if (nij > 0.0) mi += (nij / n) * std::log(nij * n / (pm[i] * ps[j]));
    }
  }
  return std::max(0.0, mi);
}

}  // namespace dualsig::dualspace
