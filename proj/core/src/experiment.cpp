#include "wql/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "wql/svg.hpp"

namespace wql {

const char* to_string(Mode m) {
  switch (m) {
    case Mode::eval: return "eval";
    case Mode::sweep: return "sweep";
    case Mode::lemma1: return "lemma1";
    case Mode::lemma4: return "lemma4";
    case Mode::audit: return "audit";
    case Mode::gen_points: return "gen-points";
    case Mode::plot: return "plot";
  }
  return "?";
}

Mode mode_from_string(std::string_view s) {
  if (s == "eval") return Mode::eval;
  if (s == "sweep") return Mode::sweep;
  if (s == "lemma1") return Mode::lemma1;
  if (s == "lemma4") return Mode::lemma4;
  if (s == "audit") return Mode::audit;
  if (s == "gen-points") return Mode::gen_points;
  if (s == "plot") return Mode::plot;
  throw Error(ErrKind::Argument, "unknown mode: " + std::string(s));
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw Error(ErrKind::Argument, "config key '" + key + "': not a number: " + v);
  return x;
}

long long parse_integer(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw Error(ErrKind::Argument, "config key '" + key + "': not an integer: " + v);
  return x;
}

std::vector<std::string> split(const std::string& v, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  return parts;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw Error(ErrKind::Argument, "config key '" + key + "': not a boolean: " + v);
}

unsigned worker_threads() {
  if (const char* env = std::getenv("WQL_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  bool deltas_set = false;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw Error(ErrKind::Argument, "config: expected key = value, got: " + t);
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));

    if (key == "mode") {
      cfg.mode = mode_from_string(value);
    } else if (key == "d") {
      cfg.d = static_cast<int>(parse_integer(key, value));
      if (cfg.d < 1) throw Error(ErrKind::Argument, "config key 'd': must be >= 1");
    } else if (key == "m") {
      cfg.m = static_cast<int>(parse_integer(key, value));
      if (cfg.m < 2) throw Error(ErrKind::Argument, "config key 'm': must be >= 2");
    } else if (key == "N") {
      cfg.n_values.clear();
      for (const std::string& p : split(value, ',')) {
        const long long n = parse_integer(key, p);
        if (n < 1) throw Error(ErrKind::Argument, "config key 'N': must be >= 1");
        cfg.n_values.push_back(static_cast<std::size_t>(n));
      }
      if (cfg.n_values.empty())
        throw Error(ErrKind::Argument, "config key 'N': empty list");
    } else if (key == "pointset") {
      cfg.pointset = point_set_kind_from_string(value);
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_integer(key, value));
    } else if (key == "family") {
      cfg.family = field_kind_from_string(value);
    } else if (key == "eps") {
      if (value.rfind("winf/", 0) == 0) {
        cfg.eps_winf_divisor = parse_number(key, value.substr(5));
        if (!(cfg.eps_winf_divisor > 0))
          throw Error(ErrKind::Argument, "config key 'eps': winf divisor must be > 0");
      } else {
        cfg.eps = parse_number(key, value);
        if (!(cfg.eps > 0)) throw Error(ErrKind::Argument, "config key 'eps': must be > 0");
      }
    } else if (key == "delta") {
      cfg.delta = parse_number(key, value);
      if (!(cfg.delta > 0)) throw Error(ErrKind::Argument, "config key 'delta': must be > 0");
    } else if (key == "coeffs") {
      cfg.coeffs.clear();
      for (const std::string& p : split(value, ',')) cfg.coeffs.push_back(parse_number(key, p));
    } else if (key == "deltas") {
      cfg.deltas.clear();
      for (const std::string& p : split(value, ',')) cfg.deltas.push_back(parse_number(key, p));
      deltas_set = true;
    } else if (key == "probes") {
      const long long p = parse_integer(key, value);
      if (p < 1) throw Error(ErrKind::Argument, "config key 'probes': must be >= 1");
      cfg.probes = static_cast<std::size_t>(p);
    } else if (key == "shape") {
      if (value != "ball" && value != "cone")
        throw Error(ErrKind::Argument, "config key 'shape': must be ball or cone");
      cfg.shape = value;
    } else if (key == "R") {
      cfg.R = parse_number(key, value);
    } else if (key == "h") {
      cfg.h = parse_number(key, value);
    } else if (key == "r") {
      cfg.r = parse_number(key, value);
    } else if (key == "out_csv") {
      cfg.out_csv = value;
    } else if (key == "out_svg") {
      cfg.out_svg = value;
    } else if (key == "out_points") {
      cfg.out_points = value;
    } else if (key == "in_csv") {
      cfg.in_csv = value;
    } else if (key == "x_col") {
      cfg.x_col = value;
    } else if (key == "y_col") {
      cfg.y_col = value;
    } else if (key == "logx") {
      cfg.logx = parse_bool(key, value);
    } else if (key == "logy") {
      cfg.logy = parse_bool(key, value);
    } else {
      throw Error(ErrKind::Argument, "config: unknown key '" + key + "'");
    }
  }
  if (!deltas_set) cfg.deltas = {0.5, 1.0, static_cast<double>(cfg.d)};
  return cfg;
}

namespace {

ScalarField build_config_field(const ExperimentConfig& cfg, const GridGeometry& geom,
                               const PointSet& pts, double w_inf) {
  FieldFamily fam;
  fam.kind = cfg.family;
  switch (cfg.family) {
    case FieldKind::extremal_eps:
      fam.eps = cfg.eps_winf_divisor > 0 ? w_inf / cfg.eps_winf_divisor : cfg.eps;
      if (!(fam.eps > 0))
        throw Error(ErrKind::Argument, "family extremal_eps needs eps (or eps=winf/<q>)");
      return build_field(fam, geom, &pts);
    case FieldKind::distance_cap: {
      fam.delta = cfg.delta;
      if (!(fam.delta > 0))
        throw Error(ErrKind::Argument, "family distance_cap needs delta > 0");
      std::vector<double> center(cfg.d, geom.origin + geom.side / 2);
      return build_field(fam, geom, nullptr, center);
    }
    case FieldKind::linear:
    case FieldKind::product_sine:
      fam.coeffs = cfg.coeffs;
      if (fam.coeffs.empty()) {
        fam.coeffs.assign(cfg.d, 0.0);
        fam.coeffs[0] = 1.0;
      }
      if (static_cast<int>(fam.coeffs.size()) != cfg.d)
        throw Error(ErrKind::Argument, "config: coeffs must have d entries");
      return build_field(fam, geom);
    case FieldKind::sampled:
      throw Error(ErrKind::Argument, "config: family 'sampled' has no generator");
  }
  throw Error(ErrKind::Argument, "config: bad field family");
}

double field_parameter(const ScalarField& f) {
  switch (f.family.kind) {
    case FieldKind::extremal_eps: return f.family.eps;
    case FieldKind::distance_cap: return f.family.delta;
    default: return 0.0;
  }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrKind::Io, "cannot open output file: " + path.string());
  out << content;
}

// Deterministic ordering regardless of worker completion order.
template <typename Fn>
std::vector<std::string> ordered_parallel(std::size_t jobs, Fn&& fn) {
  std::vector<std::string> out(jobs);
  const unsigned threads = std::min<std::size_t>(worker_threads(), jobs);
  if (threads <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < jobs; i = next++) out[i] = fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
  return out;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrKind::Io, "cannot open CSV: " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    rows.push_back(split(line, ','));
  }
  if (rows.size() < 2) throw Error(ErrKind::Io, "CSV has no data rows: " + path.string());
  return rows;
}

}  // namespace

std::string eval_csv_header() {
  return "d,m,N,kind,seed,family,eps_or_delta,E,w1,winf,l1,linf,lorentz_d1,"
         "rhs_kr,rhs_theorem,rhs_prop,ratio_kr,ratio_theorem,ratio_prop";
}

std::string eval_csv_row(const EvalRow& row) {
  const InequalityReport& r = row.report;
  std::string s;
  s += std::to_string(row.d) + ',' + std::to_string(row.m) + ',' + std::to_string(row.n);
  s += ',' + row.kind + ',' + std::to_string(row.seed) + ',' + row.family;
  for (double v : {row.eps_or_delta, r.E, r.w1, r.w_inf, r.grad.l1, r.grad.linf,
                   r.grad.lorentz_d1, r.rhs_kr, r.rhs_theorem, r.rhs_proposition,
                   r.ratio_kr, r.ratio_theorem, r.ratio_proposition})
    s += ',' + format_double(v);
  return s;
}

EvalRow compute_eval_row(const ExperimentConfig& cfg, std::size_t n) {
  const GridMeasure g = make_grid_measure(cfg.d, cfg.m);
  const PointSet pts = gen_point_set(cfg.pointset, cfg.d, n, cfg.seed);
  const TransportResult winf = solve_winf(pts, g);
  const TransportResult w1 = solve_w1(pts, g);
  const ScalarField f = build_config_field(cfg, g.geom, pts, winf.value);
  EvalRow row;
  row.d = cfg.d;
  row.m = cfg.m;
  row.n = n;
  row.kind = to_string(cfg.pointset);
  row.seed = cfg.seed;
  row.family = to_string(cfg.family);
  row.eps_or_delta = field_parameter(f);
  row.report = theorem_report_from(f, pts, w1.value, winf.value, cfg.deltas);
  return row;
}

namespace {

int run_impl(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  if (!cfg.mode) throw Error(ErrKind::Argument, "config: mode is required");
  std::filesystem::create_directories(out_dir);

  switch (*cfg.mode) {
    case Mode::eval:
    case Mode::sweep: {
      std::vector<std::size_t> ns = cfg.n_values;
      if (*cfg.mode == Mode::eval && ns.size() != 1)
        throw Error(ErrKind::Argument, "eval mode expects a single N (use sweep for lists)");
      std::sort(ns.begin(), ns.end());
      const std::vector<std::string> rows = ordered_parallel(
          ns.size(), [&](std::size_t i) { return eval_csv_row(compute_eval_row(cfg, ns[i])); });
      std::string csv = eval_csv_header() + '\n';
      for (const std::string& r : rows) csv += r + '\n';
      write_file(out_dir / cfg.out_csv, csv);
      return 0;
    }
    case Mode::lemma1: {
      const GridMeasure cube = make_grid_measure(cfg.d, cfg.m, -1.0, 2.0);
      const std::vector<double> origin(cfg.d, 0.0);
      GridMeasure mu;
      if (cfg.shape == "ball") {
        mu = restrict_to_ball(cube, origin, cfg.R);
      } else {
        std::vector<double> axis(cfg.d, 0.0);
        axis[0] = 1.0;
        mu = restrict_to_cone(cube, origin, axis, cfg.R, cfg.h);
      }
      if (!(cfg.delta > 0))
        throw Error(ErrKind::Argument, "lemma1 mode needs delta > 0");
      FieldFamily fam{FieldKind::distance_cap, 0, cfg.delta, {}};
      ScalarField f = build_field(fam, cube.geom, nullptr, origin);
      // The saturating examples concentrate the gradient on supp(mu).
      f = restrict_gradient_support(f, mu);
      const Lemma1Report rep = lemma1_verify(mu, f, cfg.R);
      std::string csv = "shape,d,m,R,h,delta,lhs,mass,lorentz,rhs,ratio\n";
      csv += cfg.shape + ',' + std::to_string(cfg.d) + ',' + std::to_string(cfg.m);
      for (double v : {cfg.R, cfg.h, cfg.delta, rep.lhs, rep.mass, rep.lorentz, rep.rhs,
                       rep.ratio})
        csv += ',' + format_double(v);
      csv += '\n';
      write_file(out_dir / cfg.out_csv, csv);
      return 0;
    }
    case Mode::lemma4: {
      if (!(cfg.r > 0)) throw Error(ErrKind::Argument, "lemma4 mode needs r > 0");
      const double delta = cfg.delta > 0 ? cfg.delta : cfg.r;
      const GridGeometry geom{cfg.d, cfg.m, -cfg.r, 2 * cfg.r};
      const std::vector<double> origin(cfg.d, 0.0);
      FieldFamily fam{FieldKind::distance_cap, 0, delta, {}};
      const ScalarField f = build_field(fam, geom, nullptr, origin);
      const double ratio = lemma4_verify(f, cfg.r);
      std::string csv = "d,m,r,delta,ratio\n";
      csv += std::to_string(cfg.d) + ',' + std::to_string(cfg.m);
      for (double v : {cfg.r, delta, ratio}) csv += ',' + format_double(v);
      csv += '\n';
      write_file(out_dir / cfg.out_csv, csv);
      return 0;
    }
    case Mode::audit: {
      if (cfg.n_values.size() != 1)
        throw Error(ErrKind::Argument, "audit mode expects a single N");
      const std::size_t n = cfg.n_values[0];
      const GridMeasure g = make_grid_measure(cfg.d, cfg.m);
      const PointSet pts = gen_point_set(cfg.pointset, cfg.d, n, cfg.seed);
      const TransportResult winf = solve_winf(pts, g);
      const ScalarField f = build_config_field(cfg, g.geom, pts, winf.value);
      const AuditReport rep = proof_chain_audit(f, pts, g, winf.plan);
      std::vector<double> sorted = rep.lemma1_ratios;
      std::sort(sorted.begin(), sorted.end());
      const double median = sorted[sorted.size() / 2];
      std::string csv =
          "d,m,N,winf,E,triangle_slack,overlap_ratio,overlap_bound,"
          "lemma1_ratio_min,lemma1_ratio_median,lemma1_ratio_max\n";
      csv += std::to_string(cfg.d) + ',' + std::to_string(cfg.m) + ',' + std::to_string(n);
      for (double v : {winf.value, rep.E, rep.triangle_slack, rep.overlap_ratio,
                       rep.overlap_bound, sorted.front(), median, sorted.back()})
        csv += ',' + format_double(v);
      csv += '\n';
      write_file(out_dir / cfg.out_csv, csv);
      return 0;
    }
    case Mode::gen_points: {
      if (cfg.n_values.size() != 1)
        throw Error(ErrKind::Argument, "gen-points mode expects a single N");
      const PointSet pts = gen_point_set(cfg.pointset, cfg.d, cfg.n_values[0], cfg.seed);
      write_file(out_dir / cfg.out_points, write_point_set_text(pts));
      return 0;
    }
    case Mode::plot: {
      if (cfg.in_csv.empty() || cfg.x_col.empty() || cfg.y_col.empty())
        throw Error(ErrKind::Argument, "plot mode needs in_csv, x_col and y_col");
      const auto rows = read_csv((out_dir / cfg.in_csv).string());
      const auto& header = rows[0];
      const auto find_col = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
          throw Error(ErrKind::Argument, "plot: no such CSV column: " + name);
        return static_cast<std::size_t>(it - header.begin());
      };
      const std::size_t xi = find_col(cfg.x_col), yi = find_col(cfg.y_col);
      std::vector<double> xs, ys;
      for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() <= std::max(xi, yi))
          throw Error(ErrKind::Io, "plot: short CSV row");
        xs.push_back(parse_number(cfg.x_col, rows[i][xi]));
        ys.push_back(parse_number(cfg.y_col, rows[i][yi]));
      }
      write_file(out_dir / cfg.out_svg,
                 line_chart_svg(xs, ys, cfg.logx, cfg.logy, cfg.x_col, cfg.y_col,
                                cfg.x_col + " vs " + cfg.y_col));
      return 0;
    }
  }
  throw Error(ErrKind::Argument, "run: bad mode");
}

}  // namespace

int run(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  try {
    return run_impl(cfg, out_dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrKind::Argument:
      case ErrKind::Io:
        return 1;
      default:
        return 2;
    }
  }
}

}  // namespace wql
