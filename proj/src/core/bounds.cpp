#include "bounds.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "json.hpp"

#include "error.hpp"

namespace spi {

namespace {

void check_spec(const BoundSpec& spec, double b) {
  require(b >= 0.0 && b <= 1.0, Errc::invalid_argument, "b must lie in [0,1]");
  if (spec.constraint == BoundConstraint::knapsack)
    require(b <= 0.5 + 1e-12, Errc::invalid_argument,
            "knapsack guarantee needs b <= 1/2");
  if (spec.constraint == BoundConstraint::uniform_k)
    require(spec.k >= 1.0, Errc::invalid_argument, "rank k must be >= 1");
}

double domain_hi(const BoundSpec& spec) {
  return spec.constraint == BoundConstraint::knapsack ? 0.5 : 1.0;
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

double selectability_formula(const BoundSpec& spec, double b) {
  check_spec(spec, b);
  switch (spec.constraint) {
    case BoundConstraint::uniform_inf:
      return 1.0;  // k -> infinity limit of the rank-k guarantee
    case BoundConstraint::uniform_k: {
      const double t = (1.0 - b) * std::sqrt(spec.k);
      return 1.0 - std::exp(-t * t / 4.0);
    }
    case BoundConstraint::matroid:
      return 1.0 - b;
    case BoundConstraint::matching:
      return std::exp(-2.0 * b);
    case BoundConstraint::knapsack:
      return b >= 0.5 ? 0.0 : (1.0 - 2.0 * b) / (2.0 - 2.0 * b);
  }
  fail(Errc::internal, "unreachable");
}

double bound_objective(const BoundSpec& spec, double b) {
  const double c = selectability_formula(spec, b);
  double v = c * std::exp(-b) * (1.0 - std::exp(-b));
  if (!spec.monotone) v /= 4.0;
  return v;
}

RatioResult optimize_ratio(const BoundSpec& spec) {
  RatioResult out;
  if (spec.constraint == BoundConstraint::uniform_inf) {
    // Limit row: the guarantee tends to one while b can approach its cap, so
    // the factor is evaluated at b = 1 directly.
    out.b_star = 1.0;
    out.ratio = std::exp(-1.0) * (1.0 - std::exp(-1.0));
    if (!spec.monotone) out.ratio /= 4.0;
    out.reciprocal = 1.0 / out.ratio;
    return out;
  }
  const double hi = domain_hi(spec);
  const auto f = [&](double b) { return bound_objective(spec, b); };

  // Coarse scan, then golden-section refinement of the bracketing cell.
  const int grid = 2000;
  int best = 0;
  double best_v = f(0.0);
  for (int i = 1; i <= grid; ++i) {
    const double b = hi * i / grid;
    const double v = f(b);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  double lo = hi * (best > 0 ? best - 1 : 0) / grid;
  double up = hi * (best < grid ? best + 1 : grid) / grid;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = up - gr * (up - lo);
  double d = lo + gr * (up - lo);
  double fc = f(c), fd = f(d);
  while (up - lo > 1e-9) {
    if (fc > fd) {
      up = d;
      d = c;
      fd = fc;
      c = up - gr * (up - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (up - lo);
      fd = f(d);
    }
  }
  out.b_star = 0.5 * (lo + up);
  out.ratio = f(out.b_star);
  out.reciprocal = out.ratio > 0 ? 1.0 / out.ratio : 0.0;
  return out;
}

std::vector<TableRow> table_rows(double finite_k) {
  std::vector<TableRow> rows;
  struct Entry {
    BoundConstraint c;
    const char* name;
    double k;
  };
  std::vector<Entry> entries = {
      {BoundConstraint::uniform_inf, "uniform (k large)", 0.0},
      {BoundConstraint::matroid, "matroid", 0.0},
      {BoundConstraint::matching, "matching", 0.0},
      {BoundConstraint::knapsack, "knapsack", 0.0},
  };
  if (finite_k > 0.0)
    entries.push_back({BoundConstraint::uniform_k, "uniform", finite_k});
  for (bool monotone : {true, false}) {
    for (const auto& e : entries) {
      BoundSpec spec{e.c, monotone, e.k};
      TableRow row;
      row.constraint = e.name;
      if (e.c == BoundConstraint::uniform_k)
        row.constraint += " k=" + fmt6(e.k);
      row.objective = monotone ? "monotone" : "general";
      row.r = optimize_ratio(spec);
      rows.push_back(std::move(row));
    }
  }
  TableRow inter;
  inter.constraint = "matroid intersection (k matroids)";
  inter.objective = "both";
  inter.formula_only = true;
  inter.note = "Omega(1/k)";
  rows.push_back(std::move(inter));
  return rows;
}

std::string table_csv(double finite_k) {
  std::string out = "constraint,objective,b_star,ratio,reciprocal,note\n";
  for (const auto& row : table_rows(finite_k)) {
    out += row.constraint + "," + row.objective + ",";
    if (row.formula_only) {
      out += ",,," + row.note;
    } else {
      out += fmt6(row.r.b_star) + "," + fmt6(row.r.ratio) + "," +
             fmt6(row.r.reciprocal) + ",";
    }
    out += "\n";
  }
  return out;
}

std::string table_json(double finite_k) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& row : table_rows(finite_k)) {
    nlohmann::json j;
    j["constraint"] = row.constraint;
    j["objective"] = row.objective;
    if (row.formula_only) {
      j["note"] = row.note;
    } else {
      j["b_star"] = row.r.b_star;
      j["ratio"] = row.r.ratio;
      j["reciprocal"] = row.r.reciprocal;
    }
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

}  // namespace spi
