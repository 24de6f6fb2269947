#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "wql/field.hpp"
#include "wql/transport.hpp"

using namespace wql;

namespace {

// All distinct point-to-positive-cell distances, sorted (the bottleneck
// candidate set).
std::vector<double> candidate_distances(const PointSet& pts, const GridMeasure& g) {
  std::vector<double> c(g.geom.dim);
  std::vector<double> out;
  for (std::size_t j = 0; j < g.cell_mass.size(); ++j) {
    if (!(g.cell_mass[j] > 0)) continue;
    g.geom.cell_center(j, c);
    for (std::size_t p = 0; p < pts.size(); ++p)
      out.push_back(rounded_distance(pts.point(p), c));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void check_plan_feasibility(const TransportPlan& plan, const GridMeasure& g) {
  const std::size_t n = plan.n_points;
  std::vector<double> row(n, 0.0);
  std::vector<double> col(g.cell_mass.size(), 0.0);
  for (const PlanEntry& e : plan.entries) {
    REQUIRE(e.mass >= 0);
    row[e.point] += e.mass;
    col[e.cell] += e.mass;
  }
  for (double r : row) CHECK(std::abs(r - 1.0 / static_cast<double>(n)) <= 1e-9);
  for (std::size_t j = 0; j < col.size(); ++j)
    CHECK(std::abs(col[j] - g.cell_mass[j]) <= 1e-9);
}

PointSet reflect_first_axis(const PointSet& ps) {
  PointSet out = ps;
  for (std::size_t k = 0; k < out.size(); ++k) out.coords[k * out.dim] = 1.0 - out.coords[k * out.dim];
  return out;
}

}  // namespace

TEST_CASE("w1 one-dimensional closed forms") {
  const GridMeasure g = make_grid_measure(1, 1024);
  PointSet center;
  center.dim = 1;
  center.coords = {0.5};
  const TransportResult res = solve_w1(center, g);
  CHECK(std::abs(res.value - 0.25) <= 2.0 / 1024);
  check_plan_feasibility(res.plan, g);

  const PointSet grid4 = gen_point_set(PointSetKind::midpoint_grid, 1, 4, 0);
  const TransportResult res4 = solve_w1(grid4, g);
  CHECK(std::abs(res4.value - 1.0 / 16) <= 2.0 / 1024);
}

TEST_CASE("w1 mean distance to square center") {
  const GridMeasure g = make_grid_measure(2, 64);
  const PointSet pts = gen_point_set(PointSetKind::single, 2, 1, 0);
  const TransportResult res = solve_w1(pts, g);
  // With a single point every coupling is forced: the value must equal the
  // direct midpoint Riemann sum of the distance.
  std::vector<double> c(2);
  double direct = 0;
  for (std::size_t j = 0; j < g.cell_mass.size(); ++j) {
    g.geom.cell_center(j, c);
    direct += rounded_distance(pts.point(0), c) * g.cell_mass[j];
  }
  CHECK(res.value == doctest::Approx(direct).epsilon(1e-9));
  CHECK(std::abs(res.value - 0.3826) <= 0.02);
}

TEST_CASE("winf examples") {
  const GridMeasure g1 = make_grid_measure(1, 1024);
  PointSet center;
  center.dim = 1;
  center.coords = {0.5};
  CHECK(std::abs(solve_winf(center, g1).value - 0.5) <= 1.0 / 1024);

  const GridMeasure g2 = make_grid_measure(2, 64);
  const PointSet single = gen_point_set(PointSetKind::single, 2, 1, 0);
  CHECK(std::abs(solve_winf(single, g2).value - std::sqrt(2.0) / 2) <= 2.0 / 64);

  const PointSet grid16 = gen_point_set(PointSetKind::midpoint_grid, 2, 16, 0);
  const TransportResult res = solve_winf(grid16, g2);
  CHECK(std::abs(res.value - std::sqrt(2.0) / 8) <= 2.0 / 64);
  check_plan_feasibility(res.plan, g2);
  // Bottleneck value is attained by an entry.
  double max_dist = 0;
  for (const PlanEntry& e : res.plan.entries)
    if (e.mass > 0) max_dist = std::max(max_dist, e.distance);
  CHECK(max_dist == doctest::Approx(res.value).epsilon(1e-12));
}

TEST_CASE("bottleneck minimality against the candidate set") {
  const GridMeasure g = make_grid_measure(2, 32);
  for (const std::uint64_t seed : {1ull, 2ull}) {
    const PointSet pts = gen_point_set(PointSetKind::full_random, 2, 7, seed);
    const TransportResult res = solve_winf(pts, g);
    CHECK(winf_feasible(pts, g, res.value));
    const std::vector<double> cand = candidate_distances(pts, g);
    const auto it = std::lower_bound(cand.begin(), cand.end(), res.value - 1e-15);
    REQUIRE(it != cand.begin());
    const double below = *(it - 1);
    CHECK_FALSE(winf_feasible(pts, g, below));
  }
}

TEST_CASE("covering radius witnesses") {
  const GridMeasure g1 = make_grid_measure(1, 1024);
  PointSet center;
  center.dim = 1;
  center.coords = {0.5};
  CHECK(std::abs(covering_radius(center, g1) - 0.5) <= 1.0 / 1024);

  const GridMeasure g2 = make_grid_measure(2, 64);
  const PointSet grid16 = gen_point_set(PointSetKind::midpoint_grid, 2, 16, 0);
  CHECK(std::abs(covering_radius(grid16, g2) - std::sqrt(2.0) / 8) <= 2.0 / 64);

  const PointSet cl = gen_point_set(PointSetKind::clustered, 2, 8, 5);
  // Direct scan oracle: the far corner cell must be served from [0,0.1]^2.
  std::vector<double> c(2);
  double far_min = 0;
  for (std::size_t j = 0; j < g2.cell_mass.size(); ++j) {
    g2.geom.cell_center(j, c);
    double best = 1e9;
    for (std::size_t p = 0; p < cl.size(); ++p)
      best = std::min(best, rounded_distance(cl.point(p), c));
    far_min = std::max(far_min, best);
  }
  const double cr = covering_radius(cl, g2);
  CHECK(cr == doctest::Approx(far_min).epsilon(1e-12));
  CHECK(cr >= 0.9 * std::sqrt(2.0) - 0.05);
}

TEST_CASE("winf dominates w1 and covering radius") {
  const GridMeasure g = make_grid_measure(2, 32);
  for (const auto& [kind, n] :
       std::vector<std::pair<PointSetKind, std::size_t>>{{PointSetKind::midpoint_grid, 4},
                                                         {PointSetKind::full_random, 9},
                                                         {PointSetKind::clustered, 5}}) {
    const PointSet pts = gen_point_set(kind, 2, n, 3);
    const double w1 = solve_w1(pts, g).value;
    const double winf = solve_winf(pts, g).value;
    CHECK(w1 <= winf + 1e-9);
    CHECK(winf >= covering_radius(pts, g) - 1e-9);
  }
}

TEST_CASE("ball-volume covering bound") {
  const int m = 32;
  const GridMeasure g2 = make_grid_measure(2, m);
  const GridMeasure g1 = make_grid_measure(1, 256);
  for (const auto& [kind, n] :
       std::vector<std::pair<PointSetKind, std::size_t>>{{PointSetKind::midpoint_grid, 16},
                                                         {PointSetKind::full_random, 12},
                                                         {PointSetKind::jittered, 9},
                                                         {PointSetKind::clustered, 6}}) {
    const PointSet pts = gen_point_set(kind, 2, n, 9);
    const double winf = solve_winf(pts, g2).value;
    CHECK(std::pow(static_cast<double>(n), 0.5) * winf >=
          std::pow(unit_ball_volume(2), -0.5) - 4.0 / m);
    const PointSet pts1 = gen_point_set(kind == PointSetKind::jittered ? kind : kind, 1,
                                        kind == PointSetKind::midpoint_grid ? 4 : n, 9);
    const double winf1 = solve_winf(pts1, g1).value;
    CHECK(static_cast<double>(pts1.size()) * winf1 >= 1.0 / unit_ball_volume(1) - 2.0 / 256 - 1e-9);
  }
}

TEST_CASE("symmetry invariance under reflection") {
  const GridMeasure g = make_grid_measure(2, 32);
  const PointSet pts = gen_point_set(PointSetKind::full_random, 2, 6, 13);
  const PointSet mirrored = reflect_first_axis(pts);
  CHECK(std::abs(solve_w1(pts, g).value - solve_w1(mirrored, g).value) <= 1e-9);
  CHECK(std::abs(solve_winf(pts, g).value - solve_winf(mirrored, g).value) <= 1e-9);
}

TEST_CASE("regions partition mass, quadrants for the midpoint grid") {
  const GridMeasure g = make_grid_measure(2, 8);
  const PointSet pts = gen_point_set(PointSetKind::midpoint_grid, 2, 4, 0);
  const TransportResult res = solve_winf(pts, g);
  const std::vector<Region> regs = regions(res.plan);
  REQUIRE(regs.size() == 4);

  double total = 0;
  std::vector<double> c(2);
  for (const Region& r : regs) {
    CHECK(r.cells.size() == 16);  // one 4x4 block per quadrant
    for (const auto& [cell, mass] : r.cells) {
      total += mass;
      CHECK(mass <= g.cell_mass[cell] + 1e-12);
      g.geom.cell_center(cell, c);
      // Every region cell lies within the bottleneck radius of its point.
      CHECK(rounded_distance(pts.point(r.point), c) <= res.value + 1e-12);
      // Quadrant membership: nearest point is the region's own point.
      CHECK((c[0] < 0.5) == (pts.point(r.point)[0] < 0.5));
      CHECK((c[1] < 0.5) == (pts.point(r.point)[1] < 0.5));
    }
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("regions for a single point cover the support") {
  const GridMeasure g = make_grid_measure(2, 16);
  const PointSet pts = gen_point_set(PointSetKind::single, 2, 1, 0);
  const std::vector<Region> regs = regions(solve_winf(pts, g).plan);
  REQUIRE(regs.size() == 1);
  CHECK(regs[0].cells.size() == g.cell_mass.size());
}

TEST_CASE("density bound check") {
  const PointSet grid16 = gen_point_set(PointSetKind::midpoint_grid, 2, 16, 0);
  const double winf = std::sqrt(2.0) / 8;
  const DensityReport rep = density_bound_check(grid16, winf, 100, 1);
  // Brute-force maximum: 4 points meet at an interior junction. Random
  // probes may or may not hit one, but the points themselves give 2
  // (own point plus none within sqrt(2)/8... adjacent spacing is 1/4).
  std::size_t brute = 0;
  const double probe[2] = {0.5, 0.5};
  for (std::size_t i = 0; i < 16; ++i)
    brute += rounded_distance(grid16.point(i), probe) <= winf + 1e-12;
  CHECK(brute == 4);
  const DensityReport at_junction = density_bound_check(grid16, winf, 100, 1);
  CHECK(at_junction.max_count <= 4);
  CHECK(rep.bound == doctest::Approx(unit_ball_volume(2) * 4 * winf * winf * 16).epsilon(1e-12));
  CHECK(rep.max_ratio <= 4.0 / rep.bound + 1e-12);

  const PointSet single = gen_point_set(PointSetKind::single, 2, 1, 0);
  const DensityReport rs = density_bound_check(single, std::sqrt(2.0) / 2, 10, 2);
  CHECK(rs.max_count == 1);
  CHECK(rs.max_ratio <= 1.0);

  const PointSet cl = gen_point_set(PointSetKind::clustered, 2, 10, 7);
  const DensityReport rc = density_bound_check(cl, 1.27, 50, 3);
  CHECK(rc.max_count == 10);
  CHECK(rc.max_ratio <= 1.0);  // bound exceeds N once winf > 0.28
}

TEST_CASE("duality lower bound via Lipschitz witnesses") {
  const int m = 32;
  const GridMeasure g = make_grid_measure(2, m);
  const PointSet pts = gen_point_set(PointSetKind::full_random, 2, 8, 21);
  const double w1 = solve_w1(pts, g).value;
  const double slack = 2 * std::sqrt(2.0) / m;

  std::vector<PointFn> witnesses;
  witnesses.push_back([](std::span<const double> x) { return x[0]; });
  witnesses.push_back([](std::span<const double> x) { return x[1]; });
  for (const double sign : {1.0, -1.0})
    witnesses.push_back([sign, pts](std::span<const double> x) {
      double best = 1e9;
      for (std::size_t k = 0; k < pts.size(); ++k) {
        double s = 0;
        for (int a = 0; a < 2; ++a)
          s += (x[a] - pts.point(k)[a]) * (x[a] - pts.point(k)[a]);
        best = std::min(best, std::sqrt(s));
      }
      return sign * best;
    });

  std::vector<double> c(2);
  for (const PointFn& w : witnesses) {
    double integral = 0;
    for (std::size_t j = 0; j < g.cell_mass.size(); ++j) {
      g.geom.cell_center(j, c);
      integral += w(c) * g.cell_mass[j];
    }
    double mean = 0;
    for (std::size_t k = 0; k < pts.size(); ++k) mean += w(pts.point(k));
    mean /= static_cast<double>(pts.size());
    CHECK(std::abs(integral - mean) <= w1 + slack);
  }
}

TEST_CASE("plan text export") {
  const GridMeasure g = make_grid_measure(1, 16);
  const PointSet pts = gen_point_set(PointSetKind::single, 1, 1, 0);
  const TransportResult res = solve_w1(pts, g);
  const std::string text = write_plan_text(res.plan);
  CHECK(text.rfind("kind=w1 value=", 0) == 0);
  CHECK(text.find(" N=1 m=16 d=1") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') ==
        static_cast<std::ptrdiff_t>(res.plan.entries.size()) + 1);
}

TEST_CASE("solver rejects non-probability and non-uniform measures") {
  const GridMeasure cube = make_grid_measure(2, 32, -1.0, 2.0);
  const std::vector<double> c0{0.0, 0.0};
  const GridMeasure all = restrict_to_ball(cube, c0, 5.0);  // full cube, mass 4
  PointSet pts;
  pts.dim = 2;
  pts.coords = {0.5, 0.5};
  CHECK_THROWS_AS(solve_winf(pts, all), Error);
  // After rescaling it is accepted.
  const GridMeasure prob = rescale_to_probability(all);
  CHECK(solve_winf(pts, prob).value > 0);
  // Fractional boundary cells violate the uniform-mass requirement.
  const GridMeasure ball = restrict_to_ball(cube, c0, 0.5);
  CHECK_THROWS_AS(solve_winf(pts, rescale_to_probability(ball)), Error);
}
