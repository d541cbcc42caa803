#pragma once

#include <cstdint>
#include <vector>

#include "dualsig/types.hpp"

namespace dualsig::dualspace {

struct StatePoint {
  double m = 0.0;
  double s = 0.0;
  std::size_t t = 0;  ///< 0-based time index
};

/// Kernel density on a regular (mean, dispersion) grid; cells sum to 1.
struct DensityGrid {
  std::vector<double> m_edges;  ///< nm + 1
  std::vector<double> s_edges;  ///< ns + 1
  std::vector<double> cells;    ///< row-major nm x ns
  double bandwidth_m = 0.0;
  double bandwidth_s = 0.0;

  std::size_t nm() const { return m_edges.size() - 1; }
  std::size_t ns() const { return s_edges.size() - 1; }
  double at(std::size_t im, std::size_t is) const { return cells[im * ns() + is]; }
};

struct Transition {
  std::size_t t = 0;  ///< edge from t to t+1
  double dm = 0.0;
  double ds = 0.0;
};

/// Per-cell mean displacement of transitions whose origin lands in the cell.
/// Cells without support are inverse-distance interpolated and flagged.
struct VectorField {
  std::vector<double> m_edges;
  std::vector<double> s_edges;
  std::vector<double> dm;
  std::vector<double> ds;
  std::vector<int> support;
  std::vector<std::uint8_t> interpolated;

  std::size_t nm() const { return m_edges.size() - 1; }
  std::size_t ns() const { return s_edges.size() - 1; }
};

std::vector<StatePoint> states(const DualSignal& signal);

/// Gaussian KDE evaluated at cell centers. bandwidth <= 0 selects the
/// per-axis Silverman rule 1.06 * sigma * T^(-1/5). Throws
/// degenerate_input_error when every point is identical.
DensityGrid density_grid(const std::vector<StatePoint>& points, std::size_t nm, std::size_t ns,
                         double bandwidth_m = 0.0, double bandwidth_s = 0.0,
                         bool parallel = false);

std::vector<Transition> transitions(const std::vector<StatePoint>& points);

VectorField vector_field(const std::vector<Transition>& edges,
                         const std::vector<StatePoint>& points, const DensityGrid& grid,
                         double idw_power = 2.0);

/// Recurrent forecast: repeatedly add the bilinearly interpolated field
/// vector; dispersion clamped at >= 0. Throws out_of_domain_error when the
/// starting point lies outside the grid.
std::vector<StatePoint> forecast_next(const StatePoint& current, const VectorField& field,
                                      const DensityGrid& density, std::size_t steps);

/// Plug-in mutual information with equal-frequency binning, natural log.
double mutual_information(const Series& m, const Series& s, std::size_t bins);

}  // namespace dualsig::dualspace
