#include "core/simplex.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace spi {
namespace {

constexpr double kPivotTol = 1e-12;
constexpr long kMaxPivots = 500000;

struct Tableau {
  int ncols = 0;                         // excludes rhs
  std::vector<std::vector<double>> row;  // m x (ncols + 1), rhs last
  std::vector<int> basis;                // basic column per row
  std::vector<bool> allowed;             // columns eligible to enter

  double& rhs(int i) { return row[i][ncols]; }

  void pivot(int pr, int pc, std::vector<double>& reduced) {
    auto& prow = row[pr];
    const double piv = prow[pc];
    for (double& v : prow) v /= piv;
    for (size_t i = 0; i < row.size(); ++i) {
      if (static_cast<int>(i) == pr) continue;
      double f = row[i][pc];
      if (f == 0.0) continue;
      auto& r = row[i];
      for (int j = 0; j <= ncols; ++j) r[j] -= f * prow[j];
      r[pc] = 0.0;
    }
    double f = reduced[pc];
    if (f != 0.0) {
      for (int j = 0; j <= ncols; ++j) reduced[j] -= f * prow[j];
      reduced[pc] = 0.0;
    }
    basis[pr] = pc;
  }

  // Bland: entering column is the lowest-index allowed column with positive
  // reduced cost; leaving row has the minimum ratio, ties broken by the
  // lowest basic column index.  Returns false at optimality.
  enum class Step { moved, optimal, unbounded };
  Step bland_step(std::vector<double>& reduced) {
    int pc = -1;
    for (int j = 0; j < ncols; ++j) {
      if (allowed[j] && reduced[j] > kPivotTol) {
        pc = j;
        break;
      }
    }
    if (pc < 0) return Step::optimal;
    int pr = -1;
    double best = 0.0;
    for (size_t i = 0; i < row.size(); ++i) {
      double a = row[i][pc];
      if (a <= kPivotTol) continue;
      double ratio = rhs(static_cast<int>(i)) / a;
      if (pr < 0 || ratio < best - kPivotTol ||
          (ratio < best + kPivotTol && basis[i] < basis[pr])) {
        pr = static_cast<int>(i);
        best = ratio;
      }
    }
    if (pr < 0) return Step::unbounded;
    pivot(pr, pc, reduced);
    return Step::moved;
  }
};

std::vector<double> reduced_costs(const Tableau& t, const std::vector<double>& cost) {
  std::vector<double> r(t.ncols + 1, 0.0);
  for (int j = 0; j < t.ncols; ++j) r[j] = cost[j];
  for (size_t i = 0; i < t.row.size(); ++i) {
    double cb = cost[t.basis[i]];
    if (cb == 0.0) continue;
    for (int j = 0; j <= t.ncols; ++j) r[j] -= cb * t.row[i][j];
  }
  return r;
}

}  // namespace

LpResult simplex_maximize(const LpProblem& lp) {
  const int n = lp.num_vars;
  const int m = static_cast<int>(lp.rows.size());
  require(static_cast<int>(lp.objective.size()) == n, Errc::dimension_mismatch,
          "objective length != num_vars");

  // Count auxiliary columns: one slack per <= row (after sign-normalizing the
  // rhs a <= row with negative rhs becomes >=, needing surplus + artificial).
  int nslack = 0, nart = 0;
  for (const auto& r : lp.rows) {
    require(static_cast<int>(r.a.size()) == n, Errc::dimension_mismatch,
            "row length != num_vars");
    bool flip = r.rhs < 0.0;
    if (r.type == RowType::le) {
      ++nslack;
      if (flip) ++nart;
    } else {
      ++nart;
    }
  }

  Tableau t;
  t.ncols = n + nslack + nart;
  t.row.assign(m, std::vector<double>(t.ncols + 1, 0.0));
  t.basis.assign(m, -1);
  t.allowed.assign(t.ncols, true);

  int slack_at = n, art_at = n + nslack;
  std::vector<bool> is_art(t.ncols, false);
  for (int i = 0; i < m; ++i) {
    const auto& src = lp.rows[i];
    double sgn = src.rhs < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) t.row[i][j] = sgn * src.a[j];
    t.row[i][t.ncols] = sgn * src.rhs;
    if (src.type == RowType::le) {
      t.row[i][slack_at] = sgn;  // surplus when the row was flipped
      if (sgn > 0) {
        t.basis[i] = slack_at;
      } else {
        t.row[i][art_at] = 1.0;
        is_art[art_at] = true;
        t.basis[i] = art_at++;
      }
      ++slack_at;
    } else {
      t.row[i][art_at] = 1.0;
      is_art[art_at] = true;
      t.basis[i] = art_at++;
    }
  }

  LpResult out;
  if (nart > 0) {
    // Phase 1: drive the artificial columns to zero.
    std::vector<double> c1(t.ncols, 0.0);
    for (int j = 0; j < t.ncols; ++j)
      if (is_art[j]) c1[j] = -1.0;
    auto reduced = reduced_costs(t, c1);
    for (long it = 0;; ++it) {
      require(it < kMaxPivots, Errc::internal, "simplex pivot limit");
      auto s = t.bland_step(reduced);
      if (s == Tableau::Step::optimal) break;
      if (s == Tableau::Step::unbounded)
        fail(Errc::internal, "phase 1 unbounded");
    }
    double infeas = 0.0;
    for (int i = 0; i < m; ++i)
      if (is_art[t.basis[i]]) infeas += t.rhs(i);
    if (infeas > 1e-9) {
      out.status = LpStatus::infeasible;
      return out;
    }
    // Pivot zero-valued artificials out where possible; redundant rows keep
    // them basic but they can no longer re-enter.
    for (int j = 0; j < t.ncols; ++j)
      if (is_art[j]) t.allowed[j] = false;
    for (int i = 0; i < m; ++i) {
      if (!is_art[t.basis[i]]) continue;
      int pc = -1;
      for (int j = 0; j < t.ncols; ++j) {
        if (!is_art[j] && std::fabs(t.row[i][j]) > 1e-9) {
          pc = j;
          break;
        }
      }
      if (pc >= 0) t.pivot(i, pc, reduced);
    }
  }

  std::vector<double> c2(t.ncols, 0.0);
  for (int j = 0; j < n; ++j) c2[j] = lp.objective[j];
  auto reduced = reduced_costs(t, c2);
  for (long it = 0;; ++it) {
    require(it < kMaxPivots, Errc::internal, "simplex pivot limit");
    auto s = t.bland_step(reduced);
    if (s == Tableau::Step::optimal) break;
    if (s == Tableau::Step::unbounded) {
      out.status = LpStatus::unbounded;
      return out;
    }
  }

  out.status = LpStatus::optimal;
  out.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i) {
    if (t.basis[i] < n) {
      out.x[t.basis[i]] = t.rhs(i);
      out.basis.push_back(t.basis[i]);
    }
  }
  std::sort(out.basis.begin(), out.basis.end());
  double v = 0.0;
  for (int j = 0; j < n; ++j) v += lp.objective[j] * out.x[j];
  out.value = v;
  return out;
}

}  // namespace spi
