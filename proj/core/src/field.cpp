#include "wql/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wql {

const char* to_string(FieldKind k) {
  switch (k) {
    case FieldKind::extremal_eps: return "extremal_eps";
    case FieldKind::distance_cap: return "distance_cap";
    case FieldKind::linear: return "linear";
    case FieldKind::product_sine: return "product_sine";
    case FieldKind::sampled: return "sampled";
  }
  return "?";
}

FieldKind field_kind_from_string(std::string_view s) {
  if (s == "extremal_eps") return FieldKind::extremal_eps;
  if (s == "distance_cap") return FieldKind::distance_cap;
  if (s == "linear") return FieldKind::linear;
  if (s == "product_sine") return FieldKind::product_sine;
  if (s == "sampled") return FieldKind::sampled;
  throw Error(ErrKind::Argument, "unknown field family: " + std::string(s));
}

namespace {

double dist(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double min_point_dist(std::span<const double> x, const PointSet& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < pts.size(); ++k) best = std::min(best, dist(x, pts.point(k)));
  return best;
}

}  // namespace

double ScalarField::value_at(std::span<const double> x) const {
  if (eval) return eval(x);
  // Multilinear interpolation on the cell-center lattice, clamped at the rim.
  const int d = geom.dim;
  const double w = geom.cell_width();
  std::vector<int> i0(d);
  std::vector<double> frac(d);
  for (int a = 0; a < d; ++a) {
    double u = (x[a] - geom.origin) / w - 0.5;
    u = std::clamp(u, 0.0, static_cast<double>(geom.res - 1));
    int i = std::min(static_cast<int>(u), geom.res - 2 >= 0 ? geom.res - 2 : 0);
    i0[a] = i;
    frac[a] = u - i;
  }
  double acc = 0;
  const unsigned corners = 1u << d;
  for (unsigned c = 0; c < corners; ++c) {
    double wgt = 1;
    std::size_t idx = 0;
    std::size_t stride = 1;
    for (int a = 0; a < d; ++a) {
      const int bit = (c >> a) & 1u;
      wgt *= bit ? frac[a] : 1.0 - frac[a];
      idx += stride * static_cast<std::size_t>(i0[a] + bit);
      stride *= static_cast<std::size_t>(geom.res);
    }
    acc += wgt * values[idx];
  }
  return acc;
}

ScalarField build_field(const FieldFamily& family, const GridGeometry& geom,
                        const PointSet* pts, std::span<const double> anchor) {
  ScalarField f;
  f.geom = geom;
  f.family = family;
  const int d = geom.dim;

  switch (family.kind) {
    case FieldKind::extremal_eps: {
      if (!(family.eps > 0))
        throw Error(ErrKind::Argument, "build_field: extremal_eps needs eps > 0");
      if (!pts || pts->dim != d)
        throw Error(ErrKind::Argument, "build_field: extremal_eps needs a matching point set");
      const PointSet copy = *pts;
      const double eps = family.eps;
      f.eval = [copy, eps](std::span<const double> x) {
        return std::min(eps, min_point_dist(x, copy));
      };
      break;
    }
    case FieldKind::distance_cap: {
      if (!(family.delta > 0))
        throw Error(ErrKind::Argument, "build_field: distance_cap needs delta > 0");
      if (static_cast<int>(anchor.size()) != d)
        throw Error(ErrKind::Argument, "build_field: distance_cap needs an anchor point");
      const std::vector<double> a(anchor.begin(), anchor.end());
      const double delta = family.delta;
      f.eval = [a, delta](std::span<const double> x) {
        return std::min(delta, dist(x, std::span<const double>(a)));
      };
      break;
    }
    case FieldKind::linear: {
      if (static_cast<int>(family.coeffs.size()) != d)
        throw Error(ErrKind::Argument, "build_field: linear needs d coefficients");
      const std::vector<double> c = family.coeffs;
      f.eval = [c](std::span<const double> x) {
        double s = 0;
        for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * x[i];
        return s;
      };
      break;
    }
    case FieldKind::product_sine: {
      if (static_cast<int>(family.coeffs.size()) != d)
        throw Error(ErrKind::Argument, "build_field: product_sine needs d coefficients");
      const std::vector<double> c = family.coeffs;
      f.eval = [c](std::span<const double> x) {
        double p = 1;
        for (std::size_t i = 0; i < c.size(); ++i) p *= std::sin(2 * M_PI * c[i] * x[i]);
        return p;
      };
      break;
    }
    case FieldKind::sampled:
      throw Error(ErrKind::Argument, "build_field: use sample_field for sampled fields");
  }

  const std::size_t cells = geom.cell_count();
  f.values.resize(cells);
  f.grad_mag.resize(cells);
  std::vector<double> x(d);
  for (std::size_t j = 0; j < cells; ++j) {
    geom.cell_center(j, x);
    f.values[j] = f.eval(x);
    switch (family.kind) {
      case FieldKind::extremal_eps:
        // Ties at the cap resolve to 0 (measure-zero set).
        f.grad_mag[j] = min_point_dist(x, *pts) < family.eps ? 1.0 : 0.0;
        break;
      case FieldKind::distance_cap:
        f.grad_mag[j] = dist(x, anchor) < family.delta ? 1.0 : 0.0;
        break;
      case FieldKind::linear: {
        double s = 0;
        for (double c : family.coeffs) s += c * c;
        f.grad_mag[j] = std::sqrt(s);
        break;
      }
      case FieldKind::product_sine: {
        double s = 0;
        for (int a = 0; a < d; ++a) {
          double term = 2 * M_PI * family.coeffs[a] * std::cos(2 * M_PI * family.coeffs[a] * x[a]);
          for (int b = 0; b < d; ++b)
            if (b != a) term *= std::sin(2 * M_PI * family.coeffs[b] * x[b]);
          s += term * term;
        }
        f.grad_mag[j] = std::sqrt(s);
        break;
      }
      case FieldKind::sampled:
        break;
    }
  }
  return f;
}

ScalarField sample_field(const GridGeometry& geom, const PointFn& fn,
                         const PointFn& grad_mag_fn) {
  ScalarField f;
  f.geom = geom;
  f.family.kind = FieldKind::sampled;
  f.eval = fn;
  const std::size_t cells = geom.cell_count();
  f.values.resize(cells);
  std::vector<double> x(geom.dim);
  for (std::size_t j = 0; j < cells; ++j) {
    geom.cell_center(j, x);
    f.values[j] = fn(x);
  }
  if (grad_mag_fn) {
    f.grad_mag.resize(cells);
    for (std::size_t j = 0; j < cells; ++j) {
      geom.cell_center(j, x);
      f.grad_mag[j] = grad_mag_fn(x);
    }
  } else {
    f.grad_mag = finite_diff_gradient(geom, f.values);
  }
  return f;
}

std::vector<double> finite_diff_gradient(const GridGeometry& geom,
                                         std::span<const double> values) {
  if (geom.res < 3)
    throw Error(ErrKind::Resolution, "finite_diff_gradient: need m >= 3 per axis");
  const std::size_t cells = geom.cell_count();
  if (values.size() != cells)
    throw Error(ErrKind::Argument, "finite_diff_gradient: value array size mismatch");
  const double w = geom.cell_width();
  std::vector<double> grad(cells, 0.0);
  for (std::size_t j = 0; j < cells; ++j) {
    double s = 0;
    std::size_t rem = j;
    std::size_t stride = 1;
    for (int a = 0; a < geom.dim; ++a) {
      const std::size_t i = rem % static_cast<std::size_t>(geom.res);
      rem /= static_cast<std::size_t>(geom.res);
      double df;
      if (i == 0)
        df = (values[j + stride] - values[j]) / w;
      else if (i + 1 == static_cast<std::size_t>(geom.res))
        df = (values[j] - values[j - stride]) / w;
      else
        df = (values[j + stride] - values[j - stride]) / (2 * w);
      s += df * df;
      stride *= static_cast<std::size_t>(geom.res);
    }
    grad[j] = std::sqrt(s);
  }
  return grad;
}

ScalarField scale_field(const ScalarField& f, double lambda) {
  ScalarField out = f;
  for (double& v : out.values) v *= lambda;
  for (double& g : out.grad_mag) g *= std::abs(lambda);
  if (f.eval) {
    const PointFn base = f.eval;
    out.eval = [base, lambda](std::span<const double> x) { return lambda * base(x); };
  }
  return out;
}

ScalarField restrict_gradient_support(const ScalarField& f, const GridMeasure& mu) {
  if (!(f.geom == mu.geom))
    throw Error(ErrKind::Argument, "restrict_gradient_support: geometry mismatch");
  ScalarField out = f;
  out.family.kind = FieldKind::sampled;
  for (std::size_t j = 0; j < out.grad_mag.size(); ++j)
    if (!(mu.cell_mass[j] > 0)) out.grad_mag[j] = 0.0;
  return out;
}

}  // namespace wql
