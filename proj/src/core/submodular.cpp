#include "core/submodular.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/simplex.hpp"

namespace spi {

namespace {

std::vector<double> checked_point(std::span<const double> x, int n) {
  require(static_cast<int>(x.size()) == n, Errc::dimension_mismatch,
          "point dimension mismatch");
  std::vector<double> out(x.begin(), x.end());
  for (double& v : out) {
    require(v >= -1e-9 && v <= 1.0 + 1e-9, Errc::invalid_argument,
            "coordinates must lie in [0,1]");
    v = std::clamp(v, 0.0, 1.0);
  }
  return out;
}

double multilinear_enum(const SetFunction& f, const std::vector<double>& x) {
  const int n = f.n();
  require(n <= 24, Errc::ground_set_too_large,
          "exact multilinear extension needs n <= 24");
  double total = 0.0;
  const std::uint64_t lim = std::uint64_t{1} << n;
  for (std::uint64_t m = 0; m < lim; ++m) {
    double w = 1.0;
    for (int i = 0; i < n && w > 0.0; ++i)
      w *= (m >> i) & 1 ? x[i] : 1.0 - x[i];
    if (w > 0.0) total += w * f.value_mask(m);
  }
  return total;
}

}  // namespace

double multilinear_exact(const SetFunction& f, std::span<const double> x) {
  auto xs = checked_point(x, f.n());
  if (const SetFunction* base = f.collapse_base()) {
    const auto& map = *f.collapse_map();
    // A base element is on when any of its copies is; copies of distinct
    // base elements are independent, so the base marginals are products.
    std::vector<double> off(base->n(), 1.0);
    for (size_t e = 0; e < map.size(); ++e) off[map[e]] *= 1.0 - xs[e];
    std::vector<double> m(base->n());
    for (int t = 0; t < base->n(); ++t) m[t] = 1.0 - off[t];
    return multilinear_exact(*base, m);
  }
  return multilinear_enum(f, xs);
}

McEstimate multilinear_mc(const SetFunction& f, std::span<const double> x,
                          long trials, std::uint64_t seed) {
  auto xs = checked_point(x, f.n());
  require(trials > 0, Errc::invalid_argument, "trials must be positive");
  const int n = f.n();
  double sum = 0.0, sumsq = 0.0;
  Bitset s(n);
  for (long t = 0; t < trials; ++t) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t));
    s.clear();
    for (int i = 0; i < n; ++i)
      if (rng.uniform() < xs[i]) s.set(i);
    double v = f.value(s);
    sum += v;
    sumsq += v * v;
  }
  McEstimate out;
  out.estimate = sum / static_cast<double>(trials);
  if (trials > 1) {
    double var = (sumsq - sum * sum / static_cast<double>(trials)) /
                 static_cast<double>(trials - 1);
    out.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(trials));
  }
  return out;
}

ConcaveDecomposition concave_closure(const SetFunction& f,
                                     std::span<const double> x) {
  const int n = f.n();
  require(n <= 12, Errc::ground_set_too_large,
          "concave closure needs n <= 12");
  auto xs = checked_point(x, n);

  const std::uint64_t cols = std::uint64_t{1} << n;
  LpProblem lp;
  lp.num_vars = static_cast<int>(cols);
  lp.objective.resize(cols);
  for (std::uint64_t m = 0; m < cols; ++m)
    lp.objective[m] = f.value_mask(m);

  LpRow total;
  total.type = RowType::eq;
  total.rhs = 1.0;
  total.a.assign(cols, 1.0);
  lp.rows.push_back(std::move(total));
  for (int i = 0; i < n; ++i) {
    LpRow row;
    row.type = RowType::eq;
    row.rhs = xs[i];
    row.a.assign(cols, 0.0);
    for (std::uint64_t m = 0; m < cols; ++m)
      if ((m >> i) & 1) row.a[m] = 1.0;
    lp.rows.push_back(std::move(row));
  }

  LpResult res = simplex_maximize(lp);
  require(res.status == LpStatus::optimal, Errc::internal,
          "closure LP did not solve");

  ConcaveDecomposition dec;
  dec.value = res.value;
  for (std::uint64_t m = 0; m < cols; ++m) {
    if (res.x[m] > 1e-10)
      dec.terms.push_back({res.x[m], Bitset::from_mask(n, m)});
  }
  return dec;
}

double concave_closure_value(const SetFunction& f, std::span<const double> x) {
  return concave_closure(f, x).value;
}

double f_max_value(const SetFunction& f, const Bitset& s) {
  require(s.size() == f.n(), Errc::dimension_mismatch, "subset size mismatch");
  auto idx = s.to_vector();
  require(idx.size() <= 22, Errc::subset_too_large,
          "subset maximization needs |S| <= 22");
  const std::uint64_t lim = std::uint64_t{1} << idx.size();
  double best = 0.0;  // empty set value, f normalized
  Bitset t(f.n());
  for (std::uint64_t m = 1; m < lim; ++m) {
    t.clear();
    for (size_t j = 0; j < idx.size(); ++j)
      if ((m >> j) & 1) t.set(idx[j]);
    best = std::max(best, f.value(t));
  }
  return best;
}

std::vector<double> rebalance_r(const ConcaveDecomposition& dec,
                                std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> covered(n, 0.0), off(n, 1.0);
  for (const auto& term : dec.terms) {
    require(term.weight >= 0.0, Errc::invalid_argument,
            "negative decomposition weight");
    require(term.weight < 1.0 - 1e-12, Errc::degenerate_weight,
            "decomposition term with weight 1");
    require(term.set.size() == n, Errc::dimension_mismatch,
            "decomposition set size mismatch");
    term.set.for_each([&](int i) {
      covered[i] += term.weight;
      off[i] *= 1.0 - term.weight;
    });
  }
  std::vector<double> r(n, 0.0);
  for (int i = 0; i < n; ++i) {
    require(std::fabs(covered[i] - x[i]) <= 1e-6, Errc::invalid_argument,
            "decomposition does not certify the marginals");
    r[i] = 1.0 - (1.0 - x[i]) / off[i];
    r[i] = std::clamp(r[i], 0.0, x[i]);
  }
  return r;
}

StarInstance star_instance(int n, double p) {
  require(n >= 1, Errc::invalid_argument, "star needs at least one spoke");
  require(p >= 0.0 && p <= 1.0, Errc::invalid_argument, "p must be in [0,1]");
  const int hub = n;
  StarInstance out;
  out.f = SetFunction::custom(
      make_ground(n + 1), /*monotone=*/false, FnKind::custom,
      [hub](const Bitset& s) {
        return (!s.test(hub) && !s.empty()) ? 1.0 : 0.0;
      });
  out.x.assign(n + 1, (1.0 - p) / n);
  out.x[hub] = p;
  return out;
}

StarStats star_stats(int n, double p) {
  require(n >= 1, Errc::invalid_argument, "star needs at least one spoke");
  require(p >= 0.0 && p <= 1.0, Errc::invalid_argument, "p must be in [0,1]");
  StarStats st;
  const double miss = 1.0 - (1.0 - p) / n;  // one spoke stays off
  st.closure = 1.0 - p;
  st.multilinear = (1.0 - p) * (1.0 - std::pow(miss, n));
  st.ratio = st.closure <= 1e-12 ? 1.0 : st.multilinear / st.closure;
  return st;
}

double gap_ratio(const SetFunction& f, std::span<const double> x) {
  double closure = concave_closure_value(f, x);
  if (closure <= 1e-12) return 1.0;
  return multilinear_exact(f, x) / closure;
}

}  // namespace spi
