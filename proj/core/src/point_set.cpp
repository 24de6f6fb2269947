#include "wql/point_set.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace wql {

const char* to_string(PointSetKind k) {
  switch (k) {
    case PointSetKind::midpoint_grid: return "midpoint_grid";
    case PointSetKind::full_random: return "full_random";
    case PointSetKind::jittered: return "jittered";
    case PointSetKind::clustered: return "clustered";
    case PointSetKind::single: return "single";
  }
  return "?";
}

PointSetKind point_set_kind_from_string(std::string_view s) {
  if (s == "midpoint_grid") return PointSetKind::midpoint_grid;
  if (s == "full_random") return PointSetKind::full_random;
  if (s == "jittered") return PointSetKind::jittered;
  if (s == "clustered") return PointSetKind::clustered;
  if (s == "single") return PointSetKind::single;
  throw Error(ErrKind::Argument, "unknown point set kind: " + std::string(s));
}

namespace {

// Largest k with k^d == n, or 0 if n is not a perfect d-th power.
std::size_t exact_root(std::size_t n, int d) {
  std::size_t k = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(n), 1.0 / d)));
  for (std::size_t c = (k > 1 ? k - 1 : 1); c <= k + 1; ++c) {
    std::size_t p = 1;
    for (int a = 0; a < d; ++a) p *= c;
    if (p == n) return c;
  }
  return 0;
}

}  // namespace

PointSet gen_point_set(PointSetKind kind, int d, std::size_t n, std::uint64_t seed) {
  if (d < 1) throw Error(ErrKind::Argument, "gen_point_set: d must be >= 1");
  if (n < 1) throw Error(ErrKind::Argument, "gen_point_set: N must be >= 1");
  PointSet ps;
  ps.dim = d;
  ps.coords.reserve(n * d);
  ps.label = to_string(kind);
  SplitMix64 rng(seed);
  switch (kind) {
    case PointSetKind::midpoint_grid:
    case PointSetKind::jittered: {
      const std::size_t k = exact_root(n, d);
      if (k == 0)
        throw Error(ErrKind::Argument, "gen_point_set: N must be a perfect d-th power");
      std::vector<std::size_t> idx(d, 0);
      for (std::size_t p = 0; p < n; ++p) {
        for (int a = 0; a < d; ++a) {
          const double off =
              (kind == PointSetKind::midpoint_grid) ? 0.5 : rng.next_unit();
          ps.coords.push_back((static_cast<double>(idx[a]) + off) / static_cast<double>(k));
        }
        for (int a = 0; a < d; ++a) {
          if (++idx[a] < k) break;
          idx[a] = 0;
        }
      }
      break;
    }
    case PointSetKind::full_random:
      for (std::size_t p = 0; p < n * d; ++p) ps.coords.push_back(rng.next_unit());
      break;
    case PointSetKind::clustered:
      for (std::size_t p = 0; p < n * d; ++p) ps.coords.push_back(0.1 * rng.next_unit());
      break;
    case PointSetKind::single:
      if (n != 1) throw Error(ErrKind::Argument, "gen_point_set: kind 'single' requires N = 1");
      for (int a = 0; a < d; ++a) ps.coords.push_back(0.5);
      break;
  }
  return ps;
}

std::string write_point_set_text(const PointSet& ps) {
  std::string out = "d=" + std::to_string(ps.dim) + " n=" + std::to_string(ps.size()) + "\n";
  char buf[48];
  for (std::size_t k = 0; k < ps.size(); ++k) {
    for (int a = 0; a < ps.dim; ++a) {
      std::snprintf(buf, sizeof(buf), "%.15g", ps.point(k)[a]);
      if (a) out += ' ';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

PointSet read_point_set_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string header;
  if (!std::getline(in, header))
    throw Error(ErrKind::Io, "point set text: missing header");
  int d = 0;
  std::size_t n = 0;
  if (std::sscanf(header.c_str(), "d=%d n=%zu", &d, &n) != 2 || d < 1 || n < 1)
    throw Error(ErrKind::Io, "point set text: bad header: " + header);
  PointSet ps;
  ps.dim = d;
  ps.coords.reserve(n * d);
  for (std::size_t k = 0; k < n; ++k) {
    for (int a = 0; a < d; ++a) {
      double v;
      if (!(in >> v)) throw Error(ErrKind::Io, "point set text: truncated coordinates");
      if (v < 0.0 || v > 1.0)
        throw Error(ErrKind::Io, "point set text: coordinate outside [0,1]");
      ps.coords.push_back(v);
    }
  }
  return ps;
}

}  // namespace wql
