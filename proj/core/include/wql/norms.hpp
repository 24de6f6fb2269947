#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wql/common.hpp"

namespace wql {

/// Norms of the piecewise-constant interpolant of grid samples, over the
/// whole grid or a cell subset.
struct NormSummary {
  double l1 = 0;
  double linf = 0;
  double lorentz_d1 = 0;
  double interp_bound = 0;  // d * linf^((d-1)/d) * l1^(1/d)
  std::string subset = "all";
};

/// (l1, linf) of |h| over the subset; subset = nullptr means all cells.
std::pair<double, double> lp_norms(std::span<const double> h, double cell_volume,
                                   const std::vector<std::size_t>* subset = nullptr);

/// Exact layer-cake Lorentz L^{d,1} norm of the piecewise-constant field:
/// d * sum_i (v_i - v_{i-1}) * |{|h| >= v_i}|^{1/d} over distinct values.
double lorentz_d1(std::span<const double> h, double cell_volume, int d,
                  const std::vector<std::size_t>* subset = nullptr);

/// Layer-cake Lorentz norm with an explicit measure per cell. Used where the
/// relevant reference measure is Lebesgue restricted to a region with
/// fractional cell coverage rather than the whole grid.
double lorentz_d1_weighted(std::span<const double> h, std::span<const double> weights,
                           int d);

/// Slack of the interpolation bound: interp_bound - lorentz_d1 (>= -1e-9).
double interpolation_check(std::span<const double> h, double cell_volume, int d,
                           const std::vector<std::size_t>* subset = nullptr);

NormSummary norm_summary(std::span<const double> h, double cell_volume, int d,
                         const std::vector<std::size_t>* subset = nullptr,
                         std::string subset_label = "all");

}  // namespace wql
