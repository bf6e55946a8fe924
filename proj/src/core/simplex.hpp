#pragma once

#include <vector>

namespace spi {

enum class RowType { le, eq };

struct LpRow {
  std::vector<double> a;
  RowType type = RowType::le;
  double rhs = 0.0;
};

// max objective . x  subject to the rows and x >= 0.
struct LpProblem {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<LpRow> rows;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double value = 0.0;
  std::vector<double> x;
  // Structural variables that ended basic (column indices < num_vars).
  std::vector<int> basis;
};

// Dense two-phase simplex with Bland's rule.  Intended for small tableaus
// (thousands of columns, a few hundred rows); pivot tolerance 1e-12.
LpResult simplex_maximize(const LpProblem& lp);

}  // namespace spi
