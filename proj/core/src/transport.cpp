#include "wql/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

namespace wql {

namespace {

constexpr double kScale = 1e12;  // distances rounded to 12 decimal digits
constexpr std::int64_t kInfCost = std::numeric_limits<std::int64_t>::max() / 4;

std::int64_t scaled_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::llround(std::sqrt(s) * kScale);
}

// Shared integer formulation: points supply K units each, positive cells
// demand N units each (K = #positive cells), so both sides total N*K.
struct Instance {
  std::size_t n = 0;  // points
  std::size_t k = 0;  // positive cells
  std::vector<std::size_t> sinks;      // cell indices
  std::vector<std::int64_t> cost;      // n*k, row-major by point
  GridGeometry geom;

  std::int64_t at(std::size_t p, std::size_t s) const { return cost[p * k + s]; }
  double unit_mass() const { return 1.0 / (static_cast<double>(n) * static_cast<double>(k)); }
};

Instance build_instance(const PointSet& pts, const GridMeasure& g) {
  if (pts.dim != g.geom.dim)
    throw Error(ErrKind::Argument, "transport: dimension mismatch between points and grid");
  Instance ins;
  ins.geom = g.geom;
  ins.n = pts.size();
  ins.sinks = g.support();
  ins.k = ins.sinks.size();
  if (ins.k == 0) throw Error(ErrKind::DegenerateSupport, "transport: measure has empty support");

  const double total = g.total_mass();
  if (std::abs(total - 1.0) > 1e-9)
    throw Error(ErrKind::Precondition, "transport: grid measure must have total mass 1");
  const double uniform = 1.0 / static_cast<double>(ins.k);
  for (std::size_t s : ins.sinks)
    if (std::abs(g.cell_mass[s] - uniform) > 1e-9 * uniform)
      throw Error(ErrKind::Precondition,
                  "transport: positive cell masses must be uniform");

  if (ins.n > (std::uint64_t{1} << 62) / ins.k)
    throw Error(ErrKind::Budget, "transport: N * m^d exceeds the integer budget");

  const int d = g.geom.dim;
  ins.cost.resize(ins.n * ins.k);
  std::vector<double> c(d);
  std::vector<double> centers(ins.k * d);
  for (std::size_t s = 0; s < ins.k; ++s) {
    g.geom.cell_center(ins.sinks[s], c);
    std::copy(c.begin(), c.end(), centers.begin() + s * d);
  }
  for (std::size_t p = 0; p < ins.n; ++p) {
    const std::span<const double> xp = pts.point(p);
    for (std::size_t s = 0; s < ins.k; ++s) {
      ins.cost[p * ins.k + s] =
          scaled_distance(xp, {centers.data() + s * d, static_cast<std::size_t>(d)});
    }
  }
  return ins;
}

std::int64_t covering_radius_scaled(const Instance& ins) {
  std::int64_t cr = 0;
  for (std::size_t s = 0; s < ins.k; ++s) {
    std::int64_t best = kInfCost;
    for (std::size_t p = 0; p < ins.n; ++p) best = std::min(best, ins.at(p, s));
    cr = std::max(cr, best);
  }
  return cr;
}

// ---------------------------------------------------------------------------
// Min-cost flow: successive shortest paths with potentials, multi-source
// Dijkstra with early exit at the first unsatisfied sink.
// ---------------------------------------------------------------------------

struct McfResult {
  bool feasible = false;
  bool used_max_retained = false;
  std::int64_t total_cost = 0;
  // Positive flows as (point, sink index within instance, units).
  std::vector<std::tuple<std::size_t, std::size_t, std::int64_t>> flows;
};

class MinCostFlow {
 public:
  MinCostFlow(const Instance& ins, std::int64_t threshold)
      : ins_(ins), n_(ins.n), k_(ins.k) {
    // CSR edge lists per point, filtered by threshold.
    estart_.assign(n_ + 1, 0);
    std::int64_t max_retained = -1;
    for (std::size_t p = 0; p < n_; ++p)
      for (std::size_t s = 0; s < k_; ++s)
        if (ins_.at(p, s) <= threshold) ++estart_[p + 1];
    for (std::size_t p = 0; p < n_; ++p) estart_[p + 1] += estart_[p];
    esink_.resize(estart_[n_]);
    ecost_.resize(estart_[n_]);
    eflow_.assign(estart_[n_], 0);
    std::vector<std::size_t> pos(estart_.begin(), estart_.end() - 1);
    for (std::size_t p = 0; p < n_; ++p)
      for (std::size_t s = 0; s < k_; ++s) {
        const std::int64_t c = ins_.at(p, s);
        if (c <= threshold) {
          esink_[pos[p]] = s;
          ecost_[pos[p]] = c;
          max_retained = std::max(max_retained, c);
          ++pos[p];
        }
      }
    max_retained_ = max_retained;
    srev_.assign(k_, {});
  }

  McfResult run() {
    McfResult res;
    const std::int64_t supply = static_cast<std::int64_t>(k_);
    const std::int64_t demand = static_cast<std::int64_t>(n_);
    excess_.assign(n_, supply);
    deficit_.assign(k_, demand);
    pi_.assign(n_ + k_, 0);
    dist_.assign(n_ + k_, kInfCost);
    settled_.assign(n_ + k_, 0);
    version_ = 0;
    parent_.assign(n_ + k_, -1);

    std::int64_t remaining = supply * static_cast<std::int64_t>(n_);
    while (remaining > 0) {
      if (!augment_once()) return res;  // infeasible (pruned graph)
      remaining = 0;
      for (std::size_t p = 0; p < n_; ++p) remaining += excess_[p];
    }
    res.feasible = true;
    for (std::size_t p = 0; p < n_; ++p)
      for (std::size_t e = estart_[p]; e < estart_[p + 1]; ++e)
        if (eflow_[e] > 0) {
          res.total_cost += ecost_[e] * eflow_[e];
          res.flows.emplace_back(p, esink_[e], eflow_[e]);
          if (ecost_[e] == max_retained_) res.used_max_retained = true;
        }
    return res;
  }

 private:
  // One Dijkstra + augmentation. Returns false if no unsatisfied sink is
  // reachable from the remaining supplies.
  bool augment_once() {
    ++version_;
    using Item = std::pair<std::int64_t, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    touched_.clear();
    for (std::size_t p = 0; p < n_; ++p)
      if (excess_[p] > 0) {
        set_dist(p, 0);
        parent_[p] = -1;
        heap.push({0, p});
      }
    std::ptrdiff_t target = -1;
    std::int64_t dist_t = 0;
    while (!heap.empty()) {
      auto [du, u] = heap.top();
      heap.pop();
      if (settled(u) || du != get_dist(u)) continue;
      settle(u);
      if (u >= n_ && deficit_[u - n_] > 0) {
        target = static_cast<std::ptrdiff_t>(u);
        dist_t = du;
        break;
      }
      if (u < n_) {
        // point -> sink forward edges (unbounded residual)
        for (std::size_t e = estart_[u]; e < estart_[u + 1]; ++e) {
          const std::size_t v = n_ + esink_[e];
          if (settled(v)) continue;
          const std::int64_t rc = ecost_[e] + pi_[u] - pi_[v];
          const std::int64_t nd = du + rc;
          if (nd < get_dist(v)) {
            set_dist(v, nd);
            parent_[v] = static_cast<std::ptrdiff_t>(e);
            heap.push({nd, v});
          }
        }
      } else {
        // sink -> point backward edges (positive flow only)
        const std::size_t s = u - n_;
        auto& rev = srev_[s];
        std::size_t w = 0;
        for (std::size_t i = 0; i < rev.size(); ++i) {
          const std::size_t e = rev[i];
          if (eflow_[e] == 0) continue;  // lazily dropped
          rev[w++] = e;
          const std::size_t p = edge_point(e);
          if (settled(p)) continue;
          const std::int64_t rc = -ecost_[e] + pi_[u] - pi_[p];
          const std::int64_t nd = du + rc;
          if (nd < get_dist(p)) {
            set_dist(p, nd);
            parent_[p] = static_cast<std::ptrdiff_t>(e);
            heap.push({nd, p});
          }
        }
        rev.resize(w);
      }
    }
    if (target < 0) return false;

    // Shift potentials of settled nodes (global constant shift dropped).
    for (std::size_t v : touched_)
      if (settled(v)) pi_[v] += get_dist(v) - dist_t;

    // Walk back to a source, find the bottleneck, then push.
    const std::size_t t = static_cast<std::size_t>(target);
    std::int64_t bottleneck = deficit_[t - n_];
    std::size_t v = t;
    while (parent_[v] >= 0) {
      const std::size_t e = static_cast<std::size_t>(parent_[v]);
      if (v >= n_) {
        v = edge_point(e);  // arrived via forward edge
      } else {
        bottleneck = std::min(bottleneck, eflow_[e]);  // backward edge
        v = n_ + esink_[e];
      }
    }
    bottleneck = std::min(bottleneck, excess_[v]);

    const std::size_t source = v;
    v = t;
    while (parent_[v] >= 0) {
      const std::size_t e = static_cast<std::size_t>(parent_[v]);
      if (v >= n_) {
        if (eflow_[e] == 0) srev_[esink_[e]].push_back(e);
        eflow_[e] += bottleneck;
        v = edge_point(e);
      } else {
        eflow_[e] -= bottleneck;
        v = n_ + esink_[e];
      }
    }
    excess_[source] -= bottleneck;
    deficit_[t - n_] -= bottleneck;
    return true;
  }

  std::size_t edge_point(std::size_t e) const {
    // CSR row lookup; edges per point are contiguous.
    const auto it = std::upper_bound(estart_.begin(), estart_.end(), e);
    return static_cast<std::size_t>(it - estart_.begin()) - 1;
  }

  bool settled(std::size_t v) const { return settled_[v] == version_; }
  void settle(std::size_t v) { settled_[v] = version_; }
  std::int64_t get_dist(std::size_t v) const {
    return dversion_.size() > v && dversion_[v] == version_ ? dist_[v] : kInfCost;
  }
  void set_dist(std::size_t v, std::int64_t d) {
    if (dversion_.size() != dist_.size()) dversion_.assign(dist_.size(), 0);
    if (dversion_[v] != version_) touched_.push_back(v);
    dversion_[v] = version_;
    dist_[v] = d;
  }

  const Instance& ins_;
  std::size_t n_, k_;
  std::vector<std::size_t> estart_;
  std::vector<std::size_t> esink_;
  std::vector<std::int64_t> ecost_, eflow_;
  std::vector<std::vector<std::size_t>> srev_;
  std::vector<std::int64_t> excess_, deficit_, pi_, dist_;
  std::vector<std::uint32_t> settled_, dversion_;
  std::vector<std::ptrdiff_t> parent_;
  std::vector<std::size_t> touched_;
  std::uint32_t version_ = 0;
  std::int64_t max_retained_ = -1;
};

// ---------------------------------------------------------------------------
// Dinic max flow for the bottleneck feasibility check.
// ---------------------------------------------------------------------------

class Dinic {
 public:
  explicit Dinic(std::size_t nodes) : head_(nodes, -1) {}

  void add_edge(std::size_t u, std::size_t v, std::int64_t cap) {
    to_.push_back(v); cap_.push_back(cap); next_.push_back(head_[u]);
    head_[u] = static_cast<std::ptrdiff_t>(to_.size()) - 1;
    to_.push_back(u); cap_.push_back(0); next_.push_back(head_[v]);
    head_[v] = static_cast<std::ptrdiff_t>(to_.size()) - 1;
  }

  std::int64_t max_flow(std::size_t s, std::size_t t) {
    std::int64_t flow = 0;
    while (bfs(s, t)) {
      iter_ = head_;
      std::int64_t f;
      while ((f = dfs(s, t, kInfCost)) > 0) flow += f;
    }
    return flow;
  }

 private:
  bool bfs(std::size_t s, std::size_t t) {
    level_.assign(head_.size(), -1);
    std::queue<std::size_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::ptrdiff_t e = head_[u]; e >= 0; e = next_[e]) {
        if (cap_[e] > 0 && level_[to_[e]] < 0) {
          level_[to_[e]] = level_[u] + 1;
          q.push(to_[e]);
        }
      }
    }
    return level_[t] >= 0;
  }

  std::int64_t dfs(std::size_t u, std::size_t t, std::int64_t limit) {
    if (u == t) return limit;
    for (std::ptrdiff_t& e = iter_[u]; e >= 0; e = next_[e]) {
      const std::size_t v = to_[e];
      if (cap_[e] > 0 && level_[v] == level_[u] + 1) {
        const std::int64_t f = dfs(v, t, std::min(limit, cap_[e]));
        if (f > 0) {
          cap_[e] -= f;
          cap_[e ^ 1] += f;
          return f;
        }
      }
    }
    return 0;
  }

  std::vector<std::size_t> to_;
  std::vector<std::int64_t> cap_;
  std::vector<std::ptrdiff_t> next_, head_, iter_;
  std::vector<int> level_;
};

bool feasible_at(const Instance& ins, std::int64_t threshold) {
  const std::size_t S = 0, T = ins.n + ins.k + 1;
  Dinic dinic(ins.n + ins.k + 2);
  const std::int64_t supply = static_cast<std::int64_t>(ins.k);
  const std::int64_t demand = static_cast<std::int64_t>(ins.n);
  for (std::size_t p = 0; p < ins.n; ++p) dinic.add_edge(S, 1 + p, supply);
  for (std::size_t s = 0; s < ins.k; ++s) dinic.add_edge(1 + ins.n + s, T, demand);
  const std::int64_t mid_cap = std::min(supply, demand);
  for (std::size_t p = 0; p < ins.n; ++p)
    for (std::size_t s = 0; s < ins.k; ++s)
      if (ins.at(p, s) <= threshold) dinic.add_edge(1 + p, 1 + ins.n + s, mid_cap);
  return dinic.max_flow(S, T) ==
         supply * static_cast<std::int64_t>(ins.n);
}

TransportPlan make_plan(const Instance& ins, const McfResult& mcf, PlanKind kind,
                        double value) {
  TransportPlan plan;
  plan.kind = kind;
  plan.value = value;
  plan.n_points = ins.n;
  plan.geom = ins.geom;
  plan.entries.reserve(mcf.flows.size());
  const double unit = ins.unit_mass();
  for (const auto& [p, s, units] : mcf.flows) {
    plan.entries.push_back(PlanEntry{
        p, ins.sinks[s], static_cast<double>(units) * unit,
        static_cast<double>(ins.at(p, s)) / kScale});
  }
  return plan;
}

}  // namespace

double rounded_distance(std::span<const double> a, std::span<const double> b) {
  return static_cast<double>(scaled_distance(a, b)) / kScale;
}

TransportResult solve_w1(const PointSet& pts, const GridMeasure& g) {
  const Instance ins = build_instance(pts, g);
  const std::int64_t cr = covering_radius_scaled(ins);

  // Pruned attempt first; fall back to the full bipartite graph if the
  // pruned problem is infeasible or its optimum touches the pruning frontier.
  McfResult mcf;
  const std::int64_t threshold = 4 * cr;
  bool pruned_something = false;
  for (std::int64_t c : ins.cost)
    if (c > threshold) { pruned_something = true; break; }
  if (pruned_something) {
    mcf = MinCostFlow(ins, threshold).run();
  }
  if (!pruned_something || !mcf.feasible || mcf.used_max_retained) {
    mcf = MinCostFlow(ins, kInfCost).run();
  }
  if (!mcf.feasible)
    throw Error(ErrKind::Numerical, "solve_w1: transportation problem infeasible");

  const double value = static_cast<double>(mcf.total_cost) /
                       (static_cast<double>(ins.n) * static_cast<double>(ins.k)) / kScale;
  return {value, make_plan(ins, mcf, PlanKind::w1, value)};
}

TransportResult solve_winf(const PointSet& pts, const GridMeasure& g) {
  const Instance ins = build_instance(pts, g);
  std::vector<std::int64_t> candidates(ins.cost);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // Nothing below the covering radius can be feasible.
  const std::int64_t cr = covering_radius_scaled(ins);
  std::size_t lo = static_cast<std::size_t>(
      std::lower_bound(candidates.begin(), candidates.end(), cr) - candidates.begin());
  std::size_t hi = candidates.size() - 1;  // full graph is always feasible
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (feasible_at(ins, candidates[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  const std::int64_t t_star = candidates[lo];

  // Among all feasible bottleneck flows, report the cheapest one: plans are
  // then deterministic and regions follow the nearest-point geometry.
  McfResult mcf = MinCostFlow(ins, t_star).run();
  if (!mcf.feasible)
    throw Error(ErrKind::Numerical, "solve_winf: internal feasibility mismatch");
  const double value = static_cast<double>(t_star) / kScale;
  return {value, make_plan(ins, mcf, PlanKind::w_infinity, value)};
}

bool winf_feasible(const PointSet& pts, const GridMeasure& g, double t) {
  const Instance ins = build_instance(pts, g);
  return feasible_at(ins, std::llround(t * kScale));
}

double covering_radius(const PointSet& pts, const GridMeasure& g) {
  if (pts.dim != g.geom.dim)
    throw Error(ErrKind::Argument, "covering_radius: dimension mismatch");
  const int d = g.geom.dim;
  std::vector<double> c(d);
  std::int64_t cr = 0;
  for (std::size_t j = 0; j < g.cell_mass.size(); ++j) {
    if (!(g.cell_mass[j] > 0)) continue;
    g.geom.cell_center(j, c);
    std::int64_t best = kInfCost;
    for (std::size_t p = 0; p < pts.size(); ++p)
      best = std::min(best, scaled_distance(pts.point(p), c));
    cr = std::max(cr, best);
  }
  return static_cast<double>(cr) / kScale;
}

std::vector<Region> regions(const TransportPlan& plan) {
  std::vector<Region> out(plan.n_points);
  for (std::size_t p = 0; p < plan.n_points; ++p) out[p].point = p;
  for (const PlanEntry& e : plan.entries)
    if (e.mass > 0) out[e.point].cells.emplace_back(e.cell, e.mass);
  return out;
}

DensityReport density_bound_check(const PointSet& pts, double w_inf,
                                  std::size_t probes, std::uint64_t seed) {
  if (!(w_inf > 0)) throw Error(ErrKind::Argument, "density_bound_check: w_inf must be > 0");
  if (probes < 1) throw Error(ErrKind::Argument, "density_bound_check: probes must be >= 1");
  const int d = pts.dim;
  const std::size_t n = pts.size();
  DensityReport rep;
  rep.probes = probes + n;
  rep.w_inf = w_inf;
  rep.bound = unit_ball_volume(d) * std::pow(2.0, d) * std::pow(w_inf, d) *
              static_cast<double>(n);

  SplitMix64 rng(seed);
  std::vector<double> x(d);
  std::size_t max_count = 0;
  auto count_at = [&](std::span<const double> probe) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (rounded_distance(pts.point(i), probe) <= w_inf + 1e-12) ++c;
    return c;
  };
  for (std::size_t q = 0; q < probes; ++q) {
    for (int a = 0; a < d; ++a) x[a] = rng.next_unit();
    max_count = std::max(max_count, count_at(x));
  }
  for (std::size_t i = 0; i < n; ++i) max_count = std::max(max_count, count_at(pts.point(i)));
  rep.max_count = max_count;
  rep.max_ratio = static_cast<double>(max_count) / rep.bound;
  return rep;
}

std::string write_plan_text(const TransportPlan& plan) {
  std::string out = "kind=";
  out += plan.kind == PlanKind::w1 ? "w1" : "w_infinity";
  out += " value=" + format_double(plan.value);
  out += " N=" + std::to_string(plan.n_points);
  out += " m=" + std::to_string(plan.geom.res);
  out += " d=" + std::to_string(plan.geom.dim);
  out += '\n';
  for (const PlanEntry& e : plan.entries) {
    out += std::to_string(e.point);
    out += ' ';
    out += std::to_string(e.cell);
    out += ' ';
    out += format_double(e.mass);
    out += ' ';
    out += format_double(e.distance);
    out += '\n';
  }
  return out;
}

}  // namespace wql
