#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wql/grid.hpp"
#include "wql/point_set.hpp"

namespace wql {

enum class FieldKind { extremal_eps, distance_cap, linear, product_sine, sampled };

const char* to_string(FieldKind k);
FieldKind field_kind_from_string(std::string_view s);

/// Analytic test-function families:
///  - extremal_eps: f(x) = min(eps, min_k ||x - x_k||)
///  - distance_cap: f(x) = min(||x - anchor||, delta)
///  - linear:       f(x) = <coeffs, x>
///  - product_sine: f(x) = prod_i sin(2 pi coeffs_i x_i)
///  - sampled:      values given, gradient by finite differences
struct FieldFamily {
  FieldKind kind = FieldKind::linear;
  double eps = 0;
  double delta = 0;
  std::vector<double> coeffs;
};

using PointFn = std::function<double(std::span<const double>)>;

/// A test function f sampled at cell centers together with |grad f| samples.
struct ScalarField {
  GridGeometry geom;
  std::vector<double> values;
  std::vector<double> grad_mag;
  FieldFamily family;
  PointFn eval;  // analytic evaluator when available

  bool has_analytic() const { return static_cast<bool>(eval); }
  /// Analytic value when available, else multilinear interpolation of samples.
  double value_at(std::span<const double> x) const;
};

ScalarField build_field(const FieldFamily& family, const GridGeometry& geom,
                        const PointSet* pts = nullptr,
                        std::span<const double> anchor = {});

/// Sample an arbitrary function; gradient magnitude by central differences
/// unless an analytic one is supplied.
ScalarField sample_field(const GridGeometry& geom, const PointFn& f,
                         const PointFn& grad_mag_fn = nullptr);

/// Central differences in the interior, one-sided at the boundary.
std::vector<double> finite_diff_gradient(const GridGeometry& geom,
                                         std::span<const double> values);

ScalarField scale_field(const ScalarField& f, double lambda);

/// Zero grad_mag on cells outside the support of `mu`. The result is treated
/// as a sampled field (the masked gradient is no longer the analytic one).
ScalarField restrict_gradient_support(const ScalarField& f, const GridMeasure& mu);

}  // namespace wql
