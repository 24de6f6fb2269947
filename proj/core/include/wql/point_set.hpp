#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wql/common.hpp"

namespace wql {

enum class PointSetKind { midpoint_grid, full_random, jittered, clustered, single };

const char* to_string(PointSetKind k);
PointSetKind point_set_kind_from_string(std::string_view s);

/// N points in [0,1]^dim, the atoms of the empirical measure.
struct PointSet {
  int dim = 0;
  std::vector<double> coords;  // flat, point-major
  std::string label;

  std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }
  std::span<const double> point(std::size_t k) const {
    return {coords.data() + k * dim, static_cast<std::size_t>(dim)};
  }
};

/// Deterministic point-set generators.
///  - midpoint_grid: centers of the k^d subcubes (requires N = k^d)
///  - full_random:   i.i.d. uniform on [0,1]^d
///  - jittered:      one uniform point per subcube (requires N = k^d)
///  - clustered:     i.i.d. uniform on [0, 0.1]^d
///  - single:        the cube center (requires N = 1)
PointSet gen_point_set(PointSetKind kind, int d, std::size_t n, std::uint64_t seed);

/// Plain-text format: header "d=<d> n=<N>", then one point per line.
std::string write_point_set_text(const PointSet& ps);
PointSet read_point_set_text(std::string_view text);

}  // namespace wql
