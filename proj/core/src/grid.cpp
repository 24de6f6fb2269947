#include "wql/grid.hpp"

#include <cmath>
#include <numeric>

namespace wql {

std::size_t GridGeometry::cell_count() const {
  std::size_t n = 1;
  for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(res);
  return n;
}

double GridGeometry::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= cell_width();
  return v;
}

void GridGeometry::cell_center(std::size_t idx, std::span<double> out) const {
  const double w = cell_width();
  for (int a = 0; a < dim; ++a) {
    std::size_t i = idx % static_cast<std::size_t>(res);
    idx /= static_cast<std::size_t>(res);
    out[a] = origin + (static_cast<double>(i) + 0.5) * w;
  }
}

double GridMeasure::total_mass() const {
  return std::accumulate(cell_mass.begin(), cell_mass.end(), 0.0);
}

std::vector<std::size_t> GridMeasure::support() const {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < cell_mass.size(); ++j)
    if (cell_mass[j] > 0) idx.push_back(j);
  return idx;
}

GridMeasure make_grid_measure(int d, int m, double origin, double side) {
  if (d < 1) throw Error(ErrKind::Argument, "make_grid_measure: d must be >= 1");
  if (m < 2) throw Error(ErrKind::Argument, "make_grid_measure: m must be >= 2");
  if (!(side > 0)) throw Error(ErrKind::Argument, "make_grid_measure: side must be positive");
  std::size_t cells = 1;
  for (int a = 0; a < d; ++a) {
    if (cells > kMaxCells / static_cast<std::size_t>(m))
      throw Error(ErrKind::Resolution, "make_grid_measure: m^d exceeds the cell budget");
    cells *= static_cast<std::size_t>(m);
  }
  GridMeasure g;
  g.geom = GridGeometry{d, m, origin, side};
  // Total mass exactly 1 regardless of cube size.
  g.cell_mass.assign(cells, 1.0 / static_cast<double>(cells));
  return g;
}

namespace {

// Fractional cell mass by midpoint subsampling: mass = vol * (fraction of
// s^d subcell centers inside the region). Captures features thinner than a
// cell (a cone near its apex) that all-or-nothing center membership misses.
template <typename Member>
GridMeasure restrict_by_subsampling(const GridMeasure& g, const Member& inside,
                                    const char* err_empty) {
  const int d = g.geom.dim;
  const int s = d == 1 ? 16 : (d == 2 ? 8 : 4);
  std::size_t sub_count = 1;
  for (int a = 0; a < d; ++a) sub_count *= static_cast<std::size_t>(s);

  GridMeasure out;
  out.geom = g.geom;
  out.cell_mass.assign(g.cell_mass.size(), 0.0);
  const double vol = g.geom.cell_volume();
  const double w = g.geom.cell_width();
  std::vector<double> c(d), p(d);
  std::size_t kept = 0;
  for (std::size_t j = 0; j < g.cell_mass.size(); ++j) {
    g.geom.cell_center(j, c);
    std::size_t hits = 0;
    for (std::size_t t = 0; t < sub_count; ++t) {
      std::size_t q = t;
      for (int a = 0; a < d; ++a) {
        const auto i = static_cast<double>(q % static_cast<std::size_t>(s));
        q /= static_cast<std::size_t>(s);
        p[a] = c[a] + w * ((i + 0.5) / s - 0.5);
      }
      hits += inside(p);
    }
    if (hits > 0) {
      out.cell_mass[j] = vol * static_cast<double>(hits) / static_cast<double>(sub_count);
      ++kept;
    }
  }
  if (kept == 0) throw Error(ErrKind::DegenerateSupport, err_empty);
  return out;
}

}  // namespace

GridMeasure restrict_to_ball(const GridMeasure& g, std::span<const double> center, double radius) {
  const int d = g.geom.dim;
  if (static_cast<int>(center.size()) != d)
    throw Error(ErrKind::Argument, "restrict_to_ball: center dimension mismatch");
  const double half_diag = 0.5 * g.geom.cell_width() * std::sqrt(static_cast<double>(d));
  if (radius < half_diag)
    throw Error(ErrKind::DegenerateSupport,
                "restrict_to_ball: radius below half a cell diagonal");
  return restrict_by_subsampling(
      g,
      [&](const std::vector<double>& p) {
        double s = 0;
        for (int a = 0; a < d; ++a) s += (p[a] - center[a]) * (p[a] - center[a]);
        return s <= radius * radius;
      },
      "restrict_to_ball: no sample point inside the ball");
}

GridMeasure restrict_to_cone(const GridMeasure& g, std::span<const double> apex,
                             std::span<const double> axis, double length, double half_width) {
  const int d = g.geom.dim;
  if (static_cast<int>(apex.size()) != d || static_cast<int>(axis.size()) != d)
    throw Error(ErrKind::Argument, "restrict_to_cone: dimension mismatch");
  if (!(length > 0))
    throw Error(ErrKind::DegenerateSupport, "restrict_to_cone: length must be positive");
  if (!(half_width > 0) || half_width > length)
    throw Error(ErrKind::Argument, "restrict_to_cone: need 0 < half_width <= length");
  double an = 0;
  for (int a = 0; a < d; ++a) an += axis[a] * axis[a];
  if (std::abs(an - 1.0) > 1e-9)
    throw Error(ErrKind::Argument, "restrict_to_cone: axis must be a unit vector");

  return restrict_by_subsampling(
      g,
      [&](const std::vector<double>& p) {
        double along = 0, norm2 = 0;
        for (int a = 0; a < d; ++a) {
          const double v = p[a] - apex[a];
          along += v * axis[a];
          norm2 += v * v;
        }
        if (along < 0 || along > length) return false;
        const double perp2 = std::max(0.0, norm2 - along * along);
        const double allowed = half_width * along / length;
        return perp2 <= allowed * allowed;
      },
      "restrict_to_cone: no sample point inside the cone");
}

GridMeasure rescale_to_probability(const GridMeasure& g) {
  const double total = g.total_mass();
  if (!(total > 0))
    throw Error(ErrKind::DegenerateSupport, "rescale_to_probability: zero total mass");
  GridMeasure out = g;
  for (double& m : out.cell_mass) m /= total;
  return out;
}

}  // namespace wql
