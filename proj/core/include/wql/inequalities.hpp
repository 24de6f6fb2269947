#pragma once

#include <span>
#include <vector>

#include "wql/field.hpp"
#include "wql/norms.hpp"
#include "wql/transport.hpp"

namespace wql {

/// Everything measured on one (field, point set) instance: the quadrature
/// error, both transport distances, the gradient norms and all right-hand
/// sides, with dimensionless ratios. Nothing here asserts an inequality
/// with an unknown dimensional constant; ratios are for reporting.
struct InequalityReport {
  int d = 0;
  std::size_t n_points = 0;
  double E = 0;
  double w1 = 0;
  double w_inf = 0;
  NormSummary grad;
  double rhs_kr = 0;           // linf * w1
  double rhs_theorem = 0;      // linf^((d-1)/d) * l1^(1/d) * N^(1/d) * w_inf^2
  double rhs_proposition = 0;  // linf^((d-1)/d) * l1^(1/d) * N * w_inf^(d+1)
  std::vector<std::pair<double, double>> rhs_delta;  // (delta, value)
  double ratio_kr = 0;
  double ratio_theorem = 0;
  double ratio_proposition = 0;
};

/// E = |sum_j f_j * cellvol - (1/N) sum_k f(x_k)|. Point values use the
/// analytic family when available, else multilinear interpolation.
double quadrature_error(const ScalarField& f, const PointSet& pts);

/// The delta-family right-hand side; delta = 1 is the theorem, delta = d
/// the cheap proposition.
double rhs_delta_value(const NormSummary& grad, std::size_t n, double w_inf,
                       double delta, int d);

InequalityReport theorem_report(const ScalarField& f, const PointSet& pts,
                                const GridMeasure& g,
                                std::span<const double> deltas = {});

/// Same, reusing already-solved transport values (the report itself is pure).
InequalityReport theorem_report_from(const ScalarField& f, const PointSet& pts,
                                     double w1, double w_inf,
                                     std::span<const double> deltas = {});

struct Lemma1Report {
  double lhs = 0;      // |integral of f dmu|
  double radius = 0;
  double mass = 0;     // mu(R^d)
  double lorentz = 0;  // L^{d,1} norm of |grad f| on {|x| <= R}
  double rhs = 0;      // R * mass^((d-1)/d) * lorentz
  double ratio = 0;
};

/// Black-box check of the isoperimetric inequality on a concrete restricted
/// measure. Preconditions: mu supported in the ball of radius R about the
/// origin, f(0) = 0 within grad-scale tolerance.
Lemma1Report lemma1_verify(const GridMeasure& mu, const ScalarField& f, double radius);

/// Ratio lhs / (r^d * linf^((d-1)/d) * l1^(1/d)) on the ball B(0, r);
/// requires f(0) = 0 within tolerance.
double lemma4_verify(const ScalarField& f, double radius);

struct AuditReport {
  double E = 0;
  std::vector<double> region_terms;   // t_k = |int_{X_k} f dmu_k - f(x_k)/N|
  double triangle_slack = 0;          // sum t_k - E  (>= 0)
  std::vector<double> lemma1_ratios;  // t_k / ((w_inf / N^((d-1)/d)) * ||grad f||_{d,1}(X_k))
  double overlap_ratio = 0;           // sum_k l1(X_k) / (w_inf^d * N * l1)
  double overlap_bound = 0;           // omega_d * 2^d
};

/// Replays the proof skeleton on a computed bottleneck plan: triangle step,
/// per-region isoperimetric ratios, region-overlap bound.
AuditReport proof_chain_audit(const ScalarField& f, const PointSet& pts,
                              const GridMeasure& g, const TransportPlan& winf_plan);

struct DeltaRow {
  double delta;
  double rhs;
  double ratio;  // E / rhs when rhs > 0
};

std::vector<DeltaRow> delta_sweep(const ScalarField& f, const PointSet& pts,
                                  const GridMeasure& g, std::span<const double> deltas);
std::vector<DeltaRow> delta_rows(const InequalityReport& report,
                                 std::span<const double> deltas);

}  // namespace wql
