#pragma once

#include <string>
#include <vector>

namespace spi {

enum class BoundConstraint { uniform_inf, uniform_k, matroid, matching, knapsack };

struct BoundSpec {
  BoundConstraint constraint = BoundConstraint::matroid;
  bool monotone = true;
  double k = 0.0;  // rank, uniform_k only
};

// Scheme guarantee c(b) from the literature menu: matroid 1-b, matching
// e^{-2b}, knapsack (1-2b)/(2-2b) on [0,1/2], uniform rank-k
// 1-exp(-t^2/4) with t = (1-b) sqrt(k).
double selectability_formula(const BoundSpec& spec, double b);

// End-to-end factor c(b) e^{-b} (1 - e^{-b}), divided by 4 for general
// (non-monotone) objectives.  The calculator works at epsilon = 0.
double bound_objective(const BoundSpec& spec, double b);

struct RatioResult {
  double b_star = 0.0;
  double ratio = 0.0;
  double reciprocal = 0.0;
};

// Maximize the factor over the feasible b range; b* is located to 1e-6.
// The infinite-rank uniform row is the k -> infinity limit taken at b -> 1,
// where the scheme guarantee tends to one.
RatioResult optimize_ratio(const BoundSpec& spec);

struct TableRow {
  std::string constraint;
  std::string objective;
  bool formula_only = false;
  std::string note;
  RatioResult r;
};

// The eight closed-form rows (four constraint kinds, monotone and general)
// plus the formula-level matroid-intersection row.  A positive finite_k adds
// the finite-rank uniform rows.
std::vector<TableRow> table_rows(double finite_k = 0.0);
std::string table_csv(double finite_k = 0.0);
std::string table_json(double finite_k = 0.0);

}  // namespace spi
