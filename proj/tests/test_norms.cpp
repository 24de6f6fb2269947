#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "wql/field.hpp"
#include "wql/norms.hpp"
#include "wql/point_set.hpp"

using namespace wql;

namespace {

ScalarField extremal_field(int d, int m, std::size_t n, double eps, std::uint64_t seed,
                           PointSetKind kind = PointSetKind::full_random) {
  const GridGeometry geom{d, m, 0.0, 1.0};
  const PointSet pts = gen_point_set(kind, d, n, seed);
  FieldFamily fam;
  fam.kind = FieldKind::extremal_eps;
  fam.eps = eps;
  return build_field(fam, geom, &pts);
}

}  // namespace

TEST_CASE("lp norms on simple vectors") {
  const std::vector<double> h{1.0, -2.0, 0.0, 0.5};
  const auto [l1, linf] = lp_norms(h, 0.25);
  CHECK(l1 == doctest::Approx(3.5 * 0.25).epsilon(1e-12));
  CHECK(linf == 2.0);

  const std::vector<std::size_t> subset{1, 3};
  const auto [l1s, linfs] = lp_norms(h, 0.25, &subset);
  CHECK(l1s == doctest::Approx(2.5 * 0.25).epsilon(1e-12));
  CHECK(linfs == 2.0);

  CHECK_THROWS_AS(lp_norms(std::vector<double>{}, 1.0), Error);
}

TEST_CASE("lorentz single layer equals scaled measure") {
  // Indicator of half the cells at height c: lorentz = d * c * (1/2)^(1/d).
  const int m = 16;
  std::vector<double> h(m * m, 0.0);
  for (std::size_t j = 0; j < h.size() / 2; ++j) h[j] = 3.0;
  const double vol = 1.0 / (m * static_cast<double>(m));
  CHECK(lorentz_d1(h, vol, 2) == doctest::Approx(2 * 3.0 * std::sqrt(0.5)).epsilon(1e-12));
  // d = 1 collapses to the L1 norm.
  CHECK(lorentz_d1(h, vol, 1) == doctest::Approx(3.0 * 0.5).epsilon(1e-12));
}

TEST_CASE("lorentz two layers") {
  // h = 2 on measure 1/4, 1 on another 1/4, 0 elsewhere (d = 2):
  // 2 * [1 * (1/2)^(1/2) + (2-1) * (1/4)^(1/2)] = sqrt(2) + 1.
  const int m = 16;
  std::vector<double> h(m * m, 0.0);
  for (std::size_t j = 0; j < 64; ++j) h[j] = 2.0;
  for (std::size_t j = 64; j < 128; ++j) h[j] = 1.0;
  const double vol = 1.0 / 256.0;
  CHECK(lorentz_d1(h, vol, 2) == doctest::Approx(std::sqrt(2.0) + 1.0).epsilon(1e-12));
}

TEST_CASE("d = 1 lorentz equals l1 on arbitrary fields") {
  for (const std::uint64_t seed : {1ull, 5ull, 9ull}) {
    const ScalarField f = extremal_field(1, 256, 6, 0.07, seed);
    const double vol = f.geom.cell_volume();
    const auto [l1, linf] = lp_norms(f.grad_mag, vol);
    CHECK(lorentz_d1(f.grad_mag, vol, 1) == doctest::Approx(l1).epsilon(1e-12));
    CHECK(linf <= 1.0 + 1e-12);
  }
}

TEST_CASE("extremal field gradient l1 matches ball volumes") {
  // |grad| is the indicator of the union of eps-balls; for well-separated
  // midpoint centers the l1 norm is N * omega_d * eps^d up to boundary cells.
  const int m = 256;
  const std::size_t n = 16;
  const double eps = 0.05;
  const ScalarField f = extremal_field(2, m, n, eps, 0, PointSetKind::midpoint_grid);
  const auto [l1, linf] = lp_norms(f.grad_mag, f.geom.cell_volume());
  CHECK(linf == 1.0);
  const double expect = static_cast<double>(n) * unit_ball_volume(2) * eps * eps;
  CHECK(std::abs(l1 - expect) <= 4 * 2 * n * eps / m);
  // Lorentz norm of an indicator: d * l1^(1/d) measured via the layer cake.
  CHECK(lorentz_d1(f.grad_mag, f.geom.cell_volume(), 2) ==
        doctest::Approx(2 * std::sqrt(l1)).epsilon(1e-12));
}

TEST_CASE("interpolation bound holds across field families") {
  std::size_t checked = 0;
  for (const int d : {1, 2, 3}) {
    const int m = d == 3 ? 24 : (d == 2 ? 64 : 512);
    const GridGeometry geom{d, m, 0.0, 1.0};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      SplitMix64 rng{seed * 1000003 + static_cast<std::uint64_t>(d)};
      // Mix of smooth, kinked, and random piecewise-constant gradients.
      std::vector<double> h(geom.cell_count());
      const int pick = static_cast<int>(rng.next() % 3);
      std::vector<double> x(d);
      for (std::size_t j = 0; j < h.size(); ++j) {
        geom.cell_center(j, x);
        switch (pick) {
          case 0: {
            double s = 1.0;
            for (int a = 0; a < d; ++a) s *= std::sin(M_PI * x[a] * (1 + seed % 3));
            h[j] = s;
            break;
          }
          case 1: {
            double dist = 0;
            for (int a = 0; a < d; ++a) dist += (x[a] - 0.5) * (x[a] - 0.5);
            h[j] = std::sqrt(dist) < 0.1 + 0.02 * static_cast<double>(seed % 5) ? 1.0 : 0.0;
            break;
          }
          default:
            h[j] = rng.next_unit() < 0.2 ? rng.next_unit() * 3 : 0.0;
        }
      }
      const double vol = geom.cell_volume();
      const auto [l1, linf] = lp_norms(h, vol);
      if (linf == 0) continue;
      const double lor = lorentz_d1(h, vol, d);
      CHECK(lor <= d * std::pow(linf, (d - 1.0) / d) * std::pow(l1, 1.0 / d) + 1e-9);
      CHECK(interpolation_check(h, vol, d) >= -1e-9);
      // Lorentz dominates l1 on a probability space of total measure <= 1.
      CHECK(lor >= l1 - 1e-9);
      ++checked;
    }
  }
  CHECK(checked >= 55);
}

TEST_CASE("lorentz homogeneity and monotonicity") {
  const ScalarField f = extremal_field(2, 64, 9, 0.08, 4);
  const double vol = f.geom.cell_volume();
  const double base = lorentz_d1(f.grad_mag, vol, 2);
  std::vector<double> scaled = f.grad_mag;
  for (double& v : scaled) v *= 2.5;
  CHECK(lorentz_d1(scaled, vol, 2) == doctest::Approx(2.5 * base).epsilon(1e-12));

  std::vector<double> larger = f.grad_mag;
  for (double& v : larger) v += 0.1;
  CHECK(lorentz_d1(larger, vol, 2) >= base);
}

TEST_CASE("subset norms are consistent with the split") {
  const ScalarField f = extremal_field(2, 32, 4, 0.2, 2, PointSetKind::midpoint_grid);
  const double vol = f.geom.cell_volume();
  std::vector<std::size_t> left, right;
  std::vector<double> x(2);
  for (std::size_t j = 0; j < f.geom.cell_count(); ++j) {
    f.geom.cell_center(j, x);
    (x[0] < 0.5 ? left : right).push_back(j);
  }
  const auto [l1a, linfa] = lp_norms(f.grad_mag, vol);
  const auto [l1l, linfl] = lp_norms(f.grad_mag, vol, &left);
  const auto [l1r, linfr] = lp_norms(f.grad_mag, vol, &right);
  CHECK(l1l + l1r == doctest::Approx(l1a).epsilon(1e-12));
  CHECK(std::max(linfl, linfr) == doctest::Approx(linfa).epsilon(1e-12));
  // Lorentz is subadditive the other way: subsets are dominated by the whole.
  CHECK(lorentz_d1(f.grad_mag, vol, 2, &left) <= lorentz_d1(f.grad_mag, vol, 2) + 1e-12);
}

TEST_CASE("norm_summary aggregates the pieces") {
  const ScalarField f = extremal_field(2, 64, 9, 0.06, 8);
  const double vol = f.geom.cell_volume();
  const NormSummary s = norm_summary(f.grad_mag, vol, 2, nullptr, "all");
  const auto [l1, linf] = lp_norms(f.grad_mag, vol);
  CHECK(s.l1 == doctest::Approx(l1).epsilon(1e-12));
  CHECK(s.linf == doctest::Approx(linf).epsilon(1e-12));
  CHECK(s.lorentz_d1 == doctest::Approx(lorentz_d1(f.grad_mag, vol, 2)).epsilon(1e-12));
  CHECK(s.interp_bound == doctest::Approx(2 * std::sqrt(linf * l1)).epsilon(1e-9));
  CHECK(s.subset == "all");
}
