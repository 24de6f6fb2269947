#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wql/grid.hpp"
#include "wql/point_set.hpp"

namespace wql {

enum class PlanKind { w1, w_infinity };

/// One coupling entry: mass shipped from point `point` to cell `cell`.
struct PlanEntry {
  std::size_t point;
  std::size_t cell;
  double mass;
  double distance;  // Euclidean point-to-cell-center, rounded to 12 decimals
};

struct TransportPlan {
  PlanKind kind;
  double value;  // mean cost for w1, bottleneck distance for w_infinity
  std::size_t n_points;
  GridGeometry geom;
  std::vector<PlanEntry> entries;
};

struct TransportResult {
  double value;
  TransportPlan plan;
};

/// Point-to-point Euclidean distance rounded to 12 decimal digits (the
/// distance actually used by both solvers, so optima reproduce exactly).
double rounded_distance(std::span<const double> a, std::span<const double> b);

/// Exact discrete W1 between the empirical measure of `pts` and `g`.
/// Integer scaling: each point supplies K units (K = #positive cells), each
/// positive cell demands N units; value = optimal cost / (N*K).
TransportResult solve_w1(const PointSet& pts, const GridMeasure& g);

/// Exact discrete bottleneck distance: smallest candidate distance t such
/// that the bipartite flow restricted to edges of distance <= t saturates
/// all supplies. The returned plan is a min-cost flow among those.
TransportResult solve_winf(const PointSet& pts, const GridMeasure& g);

/// Feasibility of the bottleneck flow at threshold t (exposed for the
/// minimality checks).
bool winf_feasible(const PointSet& pts, const GridMeasure& g, double t);

/// Max over positive-mass cells of the distance to the nearest point.
/// Lower-bound witness for the bottleneck value.
double covering_radius(const PointSet& pts, const GridMeasure& g);

/// Cells receiving positive mass from one point, with the received masses.
struct Region {
  std::size_t point;
  std::vector<std::pair<std::size_t, double>> cells;  // (cell index, mass)
};

std::vector<Region> regions(const TransportPlan& plan);

struct DensityReport {
  std::size_t probes;
  double w_inf;
  double bound;       // omega_d * 2^d * w_inf^d * N
  std::size_t max_count;
  double max_ratio;   // max over probes of count / bound
};

/// Ball-count check at `probes` random locations plus at every point.
DensityReport density_bound_check(const PointSet& pts, double w_inf,
                                  std::size_t probes, std::uint64_t seed);

std::string write_plan_text(const TransportPlan& plan);

}  // namespace wql
