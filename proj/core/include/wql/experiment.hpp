#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wql/field.hpp"
#include "wql/inequalities.hpp"
#include "wql/point_set.hpp"

namespace wql {

enum class Mode { eval, sweep, lemma1, lemma4, audit, gen_points, plot };

const char* to_string(Mode m);
Mode mode_from_string(std::string_view s);

/// Flat key=value experiment description. Unknown keys are rejected.
struct ExperimentConfig {
  std::optional<Mode> mode;
  int d = 2;
  int m = 64;
  std::vector<std::size_t> n_values{16};
  PointSetKind pointset = PointSetKind::midpoint_grid;
  std::uint64_t seed = 0;
  FieldKind family = FieldKind::linear;
  double eps = 0;
  double eps_winf_divisor = 0;  // eps given as "winf/<q>"
  double delta = 0;
  std::vector<double> coeffs;
  std::vector<double> deltas;  // defaults to {0.5, 1, d} when empty
  std::size_t probes = 100;
  // lemma1 / lemma4 scenario parameters
  std::string shape = "ball";
  double R = 0.5;
  double h = 0.1;
  double r = 0.5;
  // file names (relative to the output directory)
  std::string out_csv = "report.csv";
  std::string out_svg = "chart.svg";
  std::string out_points = "points.txt";
  std::string in_csv;
  std::string x_col, y_col;
  bool logx = true, logy = true;
};

ExperimentConfig parse_config(std::string_view text);

/// One CSV row of the eval/sweep schema. Column order is fixed:
/// d,m,N,kind,seed,family,eps_or_delta,E,w1,winf,l1,linf,lorentz_d1,
/// rhs_kr,rhs_theorem,rhs_prop,ratio_kr,ratio_theorem,ratio_prop
struct EvalRow {
  int d;
  int m;
  std::size_t n;
  std::string kind;
  std::uint64_t seed;
  std::string family;
  double eps_or_delta;
  InequalityReport report;
};

std::string eval_csv_header();
std::string eval_csv_row(const EvalRow& row);

/// Computes one eval row (pure; used by both eval and sweep).
EvalRow compute_eval_row(const ExperimentConfig& cfg, std::size_t n);

/// Runs the configured experiment, writing outputs under `out_dir`.
/// Returns 0 on success, 1 on invalid config/arguments, 2 on numerical
/// failure (infeasible solver, budget exceeded).
int run(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace wql
