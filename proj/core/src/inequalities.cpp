#include "wql/inequalities.hpp"

#include <algorithm>
#include <cmath>

namespace wql {

namespace {

double safe_ratio(double num, double den) { return den > 0 ? num / den : 0.0; }

double norm2(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// |f| at the cell containing the origin must be below gradient scale.
void check_vanishes_at_origin(const ScalarField& f) {
  const GridGeometry& geom = f.geom;
  const double w = geom.cell_width();
  std::size_t idx = 0;
  std::size_t stride = 1;
  for (int a = 0; a < geom.dim; ++a) {
    const double u = (0.0 - geom.origin) / w;
    if (u < 0 || u >= geom.res)
      throw Error(ErrKind::Precondition, "origin lies outside the grid cube");
    idx += stride * static_cast<std::size_t>(u);
    stride *= static_cast<std::size_t>(geom.res);
  }
  double linf = 0;
  for (double g : f.grad_mag) linf = std::max(linf, std::abs(g));
  const double tol =
      std::max(linf, 1.0) * geom.side * std::sqrt(static_cast<double>(geom.dim)) / geom.res;
  if (std::abs(f.values[idx]) > tol)
    throw Error(ErrKind::Precondition, "field does not vanish at the origin");
}

}  // namespace

double quadrature_error(const ScalarField& f, const PointSet& pts) {
  if (f.geom.origin != 0.0 || f.geom.side != 1.0)
    throw Error(ErrKind::Precondition, "quadrature_error: field must live on the unit cube");
  if (pts.dim != f.geom.dim)
    throw Error(ErrKind::Argument, "quadrature_error: dimension mismatch");
  const double vol = f.geom.cell_volume();
  double integral = 0;
  for (double v : f.values) integral += v;
  integral *= vol;
  double mean = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) mean += f.value_at(pts.point(k));
  mean /= static_cast<double>(pts.size());
  return std::abs(integral - mean);
}

double rhs_delta_value(const NormSummary& grad, std::size_t n, double w_inf,
                       double delta, int d) {
  if (!(delta > 0)) throw Error(ErrKind::Argument, "rhs_delta: delta must be > 0");
  return std::pow(grad.linf, (d - 1.0) / d) * std::pow(grad.l1, 1.0 / d) *
         std::pow(static_cast<double>(n), delta / d) * std::pow(w_inf, 1.0 + delta);
}

InequalityReport theorem_report_from(const ScalarField& f, const PointSet& pts,
                                     double w1, double w_inf,
                                     std::span<const double> deltas) {
  InequalityReport rep;
  rep.d = f.geom.dim;
  rep.n_points = pts.size();
  rep.E = quadrature_error(f, pts);
  rep.w1 = w1;
  rep.w_inf = w_inf;
  rep.grad = norm_summary(f.grad_mag, f.geom.cell_volume(), rep.d);
  rep.rhs_kr = rep.grad.linf * w1;
  rep.rhs_theorem = rhs_delta_value(rep.grad, rep.n_points, w_inf, 1.0, rep.d);
  rep.rhs_proposition =
      rhs_delta_value(rep.grad, rep.n_points, w_inf, static_cast<double>(rep.d), rep.d);
  for (double delta : deltas)
    rep.rhs_delta.emplace_back(delta, rhs_delta_value(rep.grad, rep.n_points, w_inf, delta, rep.d));
  rep.ratio_kr = safe_ratio(rep.E, rep.rhs_kr);
  rep.ratio_theorem = safe_ratio(rep.E, rep.rhs_theorem);
  rep.ratio_proposition = safe_ratio(rep.E, rep.rhs_proposition);
  return rep;
}

InequalityReport theorem_report(const ScalarField& f, const PointSet& pts,
                                const GridMeasure& g, std::span<const double> deltas) {
  const TransportResult w1 = solve_w1(pts, g);
  const TransportResult winf = solve_winf(pts, g);
  return theorem_report_from(f, pts, w1.value, winf.value, deltas);
}

Lemma1Report lemma1_verify(const GridMeasure& mu, const ScalarField& f, double radius) {
  if (!(f.geom == mu.geom))
    throw Error(ErrKind::Argument, "lemma1_verify: field/measure geometry mismatch");
  const int d = f.geom.dim;
  const std::size_t cells = f.geom.cell_count();
  // Cells straddling the sphere carry fractional mass; their centers may sit
  // just outside, so the support check allows half a cell diagonal.
  const double half_diag =
      0.5 * f.geom.cell_width() * std::sqrt(static_cast<double>(d));
  std::vector<double> c(d);
  for (std::size_t j = 0; j < cells; ++j) {
    f.geom.cell_center(j, c);
    if (mu.cell_mass[j] > 0 && norm2(c) > radius + half_diag + 1e-12)
      throw Error(ErrKind::Precondition,
                  "lemma1_verify: measure has mass outside the ball of radius R");
  }
  check_vanishes_at_origin(f);

  Lemma1Report rep;
  rep.radius = radius;
  rep.mass = mu.total_mass();
  double lhs = 0;
  for (std::size_t j = 0; j < cells; ++j) lhs += f.values[j] * mu.cell_mass[j];
  rep.lhs = std::abs(lhs);
  // Lorentz norm of the gradient against Lebesgue restricted to supp(mu):
  // the cell masses of mu are exactly that restriction's cell measures.
  rep.lorentz = lorentz_d1_weighted(f.grad_mag, mu.cell_mass, d);
  rep.rhs = radius * std::pow(rep.mass, (d - 1.0) / d) * rep.lorentz;
  rep.ratio = safe_ratio(rep.lhs, rep.rhs);
  return rep;
}

double lemma4_verify(const ScalarField& f, double radius) {
  const int d = f.geom.dim;
  const std::size_t cells = f.geom.cell_count();
  std::vector<double> c(d);
  std::vector<std::size_t> ball_cells;
  for (std::size_t j = 0; j < cells; ++j) {
    f.geom.cell_center(j, c);
    if (norm2(c) <= radius) ball_cells.push_back(j);
  }
  if (ball_cells.empty())
    throw Error(ErrKind::Resolution, "lemma4_verify: no cell center inside the ball");
  check_vanishes_at_origin(f);

  const double vol = f.geom.cell_volume();
  double lhs = 0;
  for (std::size_t j : ball_cells) lhs += f.values[j] * vol;
  const auto [l1, linf] = lp_norms(f.grad_mag, vol, &ball_cells);
  const double den =
      std::pow(radius, d) * std::pow(linf, (d - 1.0) / d) * std::pow(l1, 1.0 / d);
  return safe_ratio(std::abs(lhs), den);
}

AuditReport proof_chain_audit(const ScalarField& f, const PointSet& pts,
                              const GridMeasure& g, const TransportPlan& winf_plan) {
  if (winf_plan.kind != PlanKind::w_infinity)
    throw Error(ErrKind::Argument, "proof_chain_audit: needs a w_infinity plan");
  if (!(f.geom == g.geom) || !(winf_plan.geom == g.geom))
    throw Error(ErrKind::Argument, "proof_chain_audit: geometry mismatch");
  const int d = f.geom.dim;
  const std::size_t n = pts.size();
  const double vol = f.geom.cell_volume();
  const double w_inf = winf_plan.value;

  AuditReport rep;
  rep.E = quadrature_error(f, pts);
  rep.overlap_bound = unit_ball_volume(d) * std::pow(2.0, d);

  const auto [l1_total, linf_total] = lp_norms(f.grad_mag, vol);
  const std::vector<Region> regs = regions(winf_plan);
  double sum_terms = 0;
  double sum_region_l1 = 0;
  for (const Region& r : regs) {
    double integral = 0;
    std::vector<std::size_t> cell_set;
    cell_set.reserve(r.cells.size());
    for (const auto& [cell, mass] : r.cells) {
      integral += f.values[cell] * mass;
      cell_set.push_back(cell);
    }
    const double fk = f.value_at(pts.point(r.point));
    const double term = std::abs(integral - fk / static_cast<double>(n));
    rep.region_terms.push_back(term);
    sum_terms += term;

    const double region_lorentz = lorentz_d1(f.grad_mag, vol, d, &cell_set);
    const double den =
        (w_inf / std::pow(static_cast<double>(n), (d - 1.0) / d)) * region_lorentz;
    rep.lemma1_ratios.push_back(safe_ratio(term, den));

    sum_region_l1 += lp_norms(f.grad_mag, vol, &cell_set).first;
  }
  rep.triangle_slack = sum_terms - rep.E;
  rep.overlap_ratio =
      safe_ratio(sum_region_l1, std::pow(w_inf, d) * static_cast<double>(n) * l1_total);
  return rep;
}

std::vector<DeltaRow> delta_rows(const InequalityReport& report,
                                 std::span<const double> deltas) {
  std::vector<DeltaRow> rows;
  for (double delta : deltas) {
    const double rhs =
        rhs_delta_value(report.grad, report.n_points, report.w_inf, delta, report.d);
    rows.push_back(DeltaRow{delta, rhs, safe_ratio(report.E, rhs)});
  }
  return rows;
}

std::vector<DeltaRow> delta_sweep(const ScalarField& f, const PointSet& pts,
                                  const GridMeasure& g, std::span<const double> deltas) {
  for (double delta : deltas)
    if (!(delta > 0)) throw Error(ErrKind::Argument, "delta_sweep: delta must be > 0");
  const InequalityReport rep = theorem_report(f, pts, g);
  return delta_rows(rep, deltas);
}

}  // namespace wql
