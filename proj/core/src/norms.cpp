#include "wql/norms.hpp"

#include <algorithm>
#include <cmath>

namespace wql {

namespace {

std::vector<double> gather_abs(std::span<const double> h,
                               const std::vector<std::size_t>* subset) {
  std::vector<double> v;
  if (subset) {
    if (subset->empty()) throw Error(ErrKind::Argument, "norms: empty subset");
    v.reserve(subset->size());
    for (std::size_t j : *subset) v.push_back(std::abs(h[j]));
  } else {
    if (h.empty()) throw Error(ErrKind::Argument, "norms: empty field");
    v.reserve(h.size());
    for (double x : h) v.push_back(std::abs(x));
  }
  return v;
}

}  // namespace

std::pair<double, double> lp_norms(std::span<const double> h, double cell_volume,
                                   const std::vector<std::size_t>* subset) {
  const std::vector<double> v = gather_abs(h, subset);
  double l1 = 0, linf = 0;
  for (double x : v) {
    l1 += x;
    linf = std::max(linf, x);
  }
  return {l1 * cell_volume, linf};
}

double lorentz_d1(std::span<const double> h, double cell_volume, int d,
                  const std::vector<std::size_t>* subset) {
  std::vector<double> v = gather_abs(h, subset);
  std::sort(v.begin(), v.end());
  // Walk distinct values upward; cells at or above index i form the
  // super-level set {|h| >= v[i]}.
  double acc = 0;
  double prev = 0;
  const double n = static_cast<double>(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0 && v[i] == v[i - 1]) continue;
    if (v[i] == 0) continue;
    const double level_measure = (n - static_cast<double>(i)) * cell_volume;
    acc += (v[i] - prev) * std::pow(level_measure, 1.0 / d);
    prev = v[i];
  }
  return d * acc;
}

double lorentz_d1_weighted(std::span<const double> h, std::span<const double> weights,
                           int d) {
  if (h.empty() || h.size() != weights.size())
    throw Error(ErrKind::Argument, "lorentz_d1_weighted: bad value/weight sizes");
  std::vector<std::pair<double, double>> v;  // (|h|, cell measure)
  v.reserve(h.size());
  for (std::size_t j = 0; j < h.size(); ++j)
    if (weights[j] > 0) v.emplace_back(std::abs(h[j]), weights[j]);
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  // Suffix sums give the measure of each super-level set.
  std::vector<double> suffix(v.size() + 1, 0.0);
  for (std::size_t i = v.size(); i-- > 0;) suffix[i] = suffix[i + 1] + v[i].second;
  double acc = 0;
  double prev = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0 && v[i].first == v[i - 1].first) continue;
    if (v[i].first == 0) continue;
    acc += (v[i].first - prev) * std::pow(suffix[i], 1.0 / d);
    prev = v[i].first;
  }
  return d * acc;
}

double interpolation_check(std::span<const double> h, double cell_volume, int d,
                           const std::vector<std::size_t>* subset) {
  const NormSummary s = norm_summary(h, cell_volume, d, subset);
  return s.interp_bound - s.lorentz_d1;
}

NormSummary norm_summary(std::span<const double> h, double cell_volume, int d,
                         const std::vector<std::size_t>* subset,
                         std::string subset_label) {
  NormSummary s;
  std::tie(s.l1, s.linf) = lp_norms(h, cell_volume, subset);
  s.lorentz_d1 = lorentz_d1(h, cell_volume, d, subset);
  s.interp_bound =
      d * std::pow(s.linf, (d - 1.0) / d) * std::pow(s.l1, 1.0 / d);
  s.subset = std::move(subset_label);
  return s;
}

}  // namespace wql
