#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wql/common.hpp"

namespace wql {

/// Hard cap on the number of grid cells (memory budget).
inline constexpr std::size_t kMaxCells = std::size_t{1} << 22;

/// Axis-aligned cube [origin, origin+side]^dim split into res^dim equal cells.
struct GridGeometry {
  int dim = 0;
  int res = 0;        // cells per axis
  double origin = 0;  // same on every axis
  double side = 1;

  std::size_t cell_count() const;
  double cell_width() const { return side / res; }
  double cell_volume() const;
  /// Midpoint of cell `idx` (mixed-radix decode, axis 0 fastest).
  void cell_center(std::size_t idx, std::span<double> out) const;

  bool operator==(const GridGeometry&) const = default;
};

/// Discretization of an absolutely continuous measure mu <= dx into
/// per-cell masses. Each mass lies in [0, cell volume].
struct GridMeasure {
  GridGeometry geom;
  std::vector<double> cell_mass;

  double total_mass() const;
  /// Indices of cells with positive mass.
  std::vector<std::size_t> support() const;
};

/// Uniform Lebesgue instance, total mass 1 on the given cube.
GridMeasure make_grid_measure(int d, int m, double origin = 0.0, double side = 1.0);

/// Keep cells whose center lies inside the ball, mass = cell volume.
GridMeasure restrict_to_ball(const GridMeasure& g, std::span<const double> center, double radius);

/// Keep cells whose center lies inside the solid cone from `apex` along the
/// unit vector `axis`, length R, cross-sectional half-width growing linearly
/// from 0 at the apex to `half_width` at distance R.
GridMeasure restrict_to_cone(const GridMeasure& g, std::span<const double> apex,
                             std::span<const double> axis, double length, double half_width);

/// Rescale masses so the total is 1 (for feeding restricted measures to the
/// transport solvers).
GridMeasure rescale_to_probability(const GridMeasure& g);

}  // namespace wql
