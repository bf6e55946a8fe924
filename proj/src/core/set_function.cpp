#include "core/set_function.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/constraints.hpp"
#include "core/error.hpp"
#include "core/rng.hpp"

namespace spi {

namespace detail {
struct Oracle {
  virtual ~Oracle() = default;
  virtual double value(const Bitset& s) const = 0;
  GroundSet ground;
  FnKind kind = FnKind::custom;
  bool monotone = false;
};
}  // namespace detail

namespace {

using detail::Oracle;

void check_ground(const GroundSet& g) {
  require(g.n >= 0, Errc::invalid_argument, "negative ground size");
  require(g.labels.empty() || static_cast<int>(g.labels.size()) == g.n,
          Errc::dimension_mismatch, "label count != ground size");
}

struct ModularOracle : Oracle {
  std::vector<double> w;
  double value(const Bitset& s) const override {
    double v = 0.0;
    s.for_each([&](int i) { v += w[i]; });
    return v;
  }
};

struct CoverageOracle : Oracle {
  std::vector<Bitset> covers;  // items covered by each element
  std::vector<double> item_w;
  int items = 0;
  double value(const Bitset& s) const override {
    Bitset u(items);
    s.for_each([&](int i) { u |= covers[i]; });
    double v = 0.0;
    u.for_each([&](int t) { v += item_w[t]; });
    return v;
  }
};

struct CutOracle : Oracle {
  std::vector<Arc> arcs;
  double value(const Bitset& s) const override {
    double v = 0.0;
    for (const auto& a : arcs)
      if (s.test(a.from) && !s.test(a.to)) v += a.weight;
    return v;
  }
};

struct TableOracle : Oracle {
  std::vector<double> values;  // 2^n entries
  double value(const Bitset& s) const override {
    return values[s.low_mask()];
  }
};

struct BudgetAdditiveOracle : Oracle {
  std::vector<double> w;
  double budget = 0.0;
  double value(const Bitset& s) const override {
    double v = 0.0;
    s.for_each([&](int i) { v += w[i]; });
    return std::min(v, budget);
  }
};

struct MatroidRankOracle : Oracle {
  ConstraintFamily matroid;
  std::vector<double> w;
  std::vector<int> order;  // by weight desc, index asc
  double value(const Bitset& s) const override {
    Bitset sel(ground.n);
    double v = 0.0;
    for (int i : order) {
      if (!s.test(i)) continue;
      Bitset cand = sel.with(i);
      if (matroid.is_independent(cand)) {
        sel = cand;
        v += w[i];
      }
    }
    return v;
  }
};

struct SumOracle : Oracle {
  SetFunction a, b;
  double wa = 1.0, wb = 1.0;
  double value(const Bitset& s) const override {
    return wa * a.value(s) + wb * b.value(s);
  }
};

struct CustomOracle : Oracle {
  std::function<double(const Bitset&)> fn;
  double value(const Bitset& s) const override { return fn(s); }
};

struct CollapseOracle : Oracle {
  SetFunction base;
  std::vector<int> to_base;
  double value(const Bitset& s) const override {
    Bitset b(base.n());
    s.for_each([&](int e) { b.set(to_base[e]); });
    return base.value(b);
  }
};

template <class T>
SetFunction wrap(std::shared_ptr<T> o) {
  return detail::wrap_oracle(std::move(o));
}

}  // namespace

SetFunction detail::wrap_oracle(std::shared_ptr<const detail::Oracle> impl) {
  return SetFunction(std::move(impl));
}

double SetFunction::value(const Bitset& s) const {
  require(impl_ != nullptr, Errc::invalid_argument, "empty set function");
  require(s.size() == impl_->ground.n, Errc::dimension_mismatch,
          "subset ground size mismatch");
  return impl_->value(s);
}

double SetFunction::value_mask(std::uint64_t mask) const {
  return value(Bitset::from_mask(n(), mask));
}

int SetFunction::n() const { return impl_ ? impl_->ground.n : 0; }

const GroundSet& SetFunction::ground() const {
  require(impl_ != nullptr, Errc::invalid_argument, "empty set function");
  return impl_->ground;
}

bool SetFunction::is_monotone() const { return impl_ && impl_->monotone; }

FnKind SetFunction::kind() const {
  return impl_ ? impl_->kind : FnKind::custom;
}

const SetFunction* SetFunction::collapse_base() const {
  auto* c = dynamic_cast<const CollapseOracle*>(impl_.get());
  return c ? &c->base : nullptr;
}

const std::vector<int>* SetFunction::collapse_map() const {
  auto* c = dynamic_cast<const CollapseOracle*>(impl_.get());
  return c ? &c->to_base : nullptr;
}

const char* fn_kind_name(FnKind k) {
  switch (k) {
    case FnKind::modular: return "modular";
    case FnKind::coverage: return "coverage";
    case FnKind::cut: return "cut";
    case FnKind::table: return "table";
    case FnKind::budget_additive: return "budget-additive";
    case FnKind::matroid_rank: return "matroid-rank";
    case FnKind::custom: return "custom";
    case FnKind::derived: return "derived";
  }
  return "?";
}

SetFunction SetFunction::modular(GroundSet g, std::vector<double> weights) {
  check_ground(g);
  require(static_cast<int>(weights.size()) == g.n, Errc::dimension_mismatch,
          "weight count != ground size");
  for (double w : weights)
    require(w >= 0.0, Errc::invalid_argument, "modular weights must be >= 0");
  auto o = std::make_shared<ModularOracle>();
  o->ground = std::move(g);
  o->kind = FnKind::modular;
  o->monotone = true;
  o->w = std::move(weights);
  return wrap(std::move(o));
}

SetFunction SetFunction::coverage(GroundSet g,
                                  std::vector<std::vector<int>> covers,
                                  std::vector<double> item_weights) {
  check_ground(g);
  require(static_cast<int>(covers.size()) == g.n, Errc::dimension_mismatch,
          "cover list count != ground size");
  int items = 0;
  for (const auto& c : covers)
    for (int t : c) {
      require(t >= 0, Errc::invalid_argument, "negative item index");
      items = std::max(items, t + 1);
    }
  if (item_weights.empty()) item_weights.assign(items, 1.0);
  require(static_cast<int>(item_weights.size()) >= items,
          Errc::dimension_mismatch, "item weight count too small");
  items = static_cast<int>(item_weights.size());
  for (double w : item_weights)
    require(w >= 0.0, Errc::invalid_argument, "item weights must be >= 0");
  auto o = std::make_shared<CoverageOracle>();
  o->ground = std::move(g);
  o->kind = FnKind::coverage;
  o->monotone = true;
  o->items = items;
  o->item_w = std::move(item_weights);
  o->covers.reserve(covers.size());
  for (const auto& c : covers) {
    Bitset b(items);
    for (int t : c) b.set(t);
    o->covers.push_back(std::move(b));
  }
  return wrap(std::move(o));
}

SetFunction SetFunction::directed_cut(GroundSet g, std::vector<Arc> arcs) {
  check_ground(g);
  for (const auto& a : arcs) {
    require(a.from >= 0 && a.from < g.n && a.to >= 0 && a.to < g.n,
            Errc::invalid_argument, "arc endpoint out of range");
    require(a.from != a.to, Errc::invalid_argument, "self loop arc");
    require(a.weight >= 0.0, Errc::invalid_argument, "arc weights must be >= 0");
  }
  auto o = std::make_shared<CutOracle>();
  o->ground = std::move(g);
  o->kind = FnKind::cut;
  o->monotone = arcs.empty();
  o->arcs = std::move(arcs);
  return wrap(std::move(o));
}

SetFunction SetFunction::table(GroundSet g, std::vector<double> values) {
  check_ground(g);
  require(g.n <= 20, Errc::ground_set_too_large, "table kind needs n <= 20");
  require(values.size() == (size_t{1} << g.n), Errc::dimension_mismatch,
          "table needs 2^n values");
  require(std::fabs(values[0]) <= 1e-12, Errc::invalid_argument,
          "table value of the empty set must be 0");
  for (double v : values)
    require(v >= -1e-12, Errc::invalid_argument, "table values must be >= 0");
  auto o = std::make_shared<TableOracle>();
  o->ground = std::move(g);
  o->kind = FnKind::table;
  o->values = std::move(values);
  // Monotone iff every single-element extension is non-decreasing.
  bool mono = true;
  const int n = o->ground.n;
  for (std::uint64_t m = 0; mono && m < (std::uint64_t{1} << n); ++m)
    for (int i = 0; i < n; ++i) {
      if (m & (std::uint64_t{1} << i)) continue;
      if (o->values[m | (std::uint64_t{1} << i)] < o->values[m] - 1e-12) {
        mono = false;
        break;
      }
    }
  o->monotone = mono;
  return wrap(std::move(o));
}

SetFunction SetFunction::budget_additive(GroundSet g, std::vector<double> weights,
                                         double budget) {
  check_ground(g);
  require(static_cast<int>(weights.size()) == g.n, Errc::dimension_mismatch,
          "weight count != ground size");
  require(budget >= 0.0, Errc::invalid_argument, "budget must be >= 0");
  for (double w : weights)
    require(w >= 0.0, Errc::invalid_argument, "weights must be >= 0");
  auto o = std::make_shared<BudgetAdditiveOracle>();
  o->ground = std::move(g);
  o->kind = FnKind::budget_additive;
  o->monotone = true;
  o->w = std::move(weights);
  o->budget = budget;
  return wrap(std::move(o));
}

SetFunction SetFunction::weighted_matroid_rank(GroundSet g,
                                               const ConstraintFamily& matroid,
                                               std::vector<double> weights) {
  check_ground(g);
  require(matroid.n() == g.n, Errc::dimension_mismatch,
          "matroid ground size mismatch");
  require(static_cast<int>(weights.size()) == g.n, Errc::dimension_mismatch,
          "weight count != ground size");
  for (double w : weights)
    require(w >= 0.0, Errc::invalid_argument, "weights must be >= 0");
  auto o = std::make_shared<MatroidRankOracle>();
  o->ground = std::move(g);
  o->kind = FnKind::matroid_rank;
  o->monotone = true;
  o->matroid = matroid;
  o->w = std::move(weights);
  o->order.resize(o->ground.n);
  std::iota(o->order.begin(), o->order.end(), 0);
  std::stable_sort(o->order.begin(), o->order.end(),
                   [&](int a, int b) { return o->w[a] > o->w[b]; });
  return wrap(std::move(o));
}

SetFunction SetFunction::sum(const SetFunction& a, const SetFunction& b,
                             double wa, double wb) {
  require(a.valid() && b.valid(), Errc::invalid_argument, "empty summand");
  require(a.n() == b.n(), Errc::dimension_mismatch, "summand ground mismatch");
  require(wa >= 0.0 && wb >= 0.0, Errc::invalid_argument,
          "sum weights must be >= 0");
  auto o = std::make_shared<SumOracle>();
  o->ground = a.ground();
  o->kind = FnKind::custom;
  o->monotone = a.is_monotone() && b.is_monotone();
  o->a = a;
  o->b = b;
  o->wa = wa;
  o->wb = wb;
  return wrap(std::move(o));
}

SetFunction SetFunction::custom(GroundSet g, bool monotone, FnKind tag,
                                std::function<double(const Bitset&)> fn) {
  check_ground(g);
  auto o = std::make_shared<CustomOracle>();
  o->ground = std::move(g);
  o->kind = tag;
  o->monotone = monotone;
  o->fn = std::move(fn);
  return wrap(std::move(o));
}

SetFunction SetFunction::collapse(SetFunction base, GroundSet lifted,
                                  std::vector<int> to_base) {
  check_ground(lifted);
  require(base.valid(), Errc::invalid_argument, "empty base function");
  require(static_cast<int>(to_base.size()) == lifted.n, Errc::dimension_mismatch,
          "collapse map size mismatch");
  for (int t : to_base)
    require(t >= 0 && t < base.n(), Errc::invalid_argument,
            "collapse map target out of range");
  auto o = std::make_shared<CollapseOracle>();
  o->ground = std::move(lifted);
  o->kind = FnKind::derived;
  o->monotone = base.is_monotone();
  o->base = std::move(base);
  o->to_base = std::move(to_base);
  return wrap(std::move(o));
}

void check_normalized(const SetFunction& f) {
  require(f.valid(), Errc::invalid_argument, "empty set function");
  require(std::fabs(f.value(Bitset(f.n()))) <= 1e-12, Errc::invalid_argument,
          "set function not normalized at the empty set");
}

namespace {

Bitset random_subset(int n, Rng& rng) {
  Bitset s(n);
  for (int i = 0; i < n; ++i)
    if (rng.bernoulli(0.5)) s.set(i);
  return s;
}

}  // namespace

ValidationReport check_submodular(const SetFunction& f, int sample_cases,
                                  std::uint64_t seed) {
  const int n = f.n();
  const double slack = 1e-9;
  auto violated = [&](const Bitset& s, int i, int j) {
    double fi = f.value(s.with(i));
    double fj = f.value(s.with(j));
    double fij = f.value(s.with(i).with(j));
    double f0 = f.value(s);
    return fi + fj < fij + f0 - slack;
  };
  if (n <= 10) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
          if (m & ((std::uint64_t{1} << i) | (std::uint64_t{1} << j))) continue;
          Bitset s = Bitset::from_mask(n, m);
          if (violated(s, i, j))
            return {false, "submodularity violated at " + s.to_string() +
                               " with elements " + std::to_string(i) + "," +
                               std::to_string(j)};
        }
    return {true, ""};
  }
  Rng rng(seed);
  for (int c = 0; c < sample_cases; ++c) {
    int i = rng.uniform_int(n);
    int j = rng.uniform_int(n);
    if (i == j) continue;
    Bitset s = random_subset(n, rng);
    s.reset(i);
    s.reset(j);
    if (violated(s, i, j))
      return {false, "submodularity violated on a sampled case"};
  }
  return {true, ""};
}

ValidationReport check_monotone(const SetFunction& f, int sample_cases,
                                std::uint64_t seed) {
  const int n = f.n();
  const double slack = 1e-9;
  if (n <= 10) {
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
      Bitset s = Bitset::from_mask(n, m);
      double base = f.value(s);
      for (int i = 0; i < n; ++i) {
        if (s.test(i)) continue;
        if (f.value(s.with(i)) < base - slack)
          return {false, "monotonicity violated at " + s.to_string() +
                             " adding " + std::to_string(i)};
      }
    }
    return {true, ""};
  }
  Rng rng(seed);
  for (int c = 0; c < sample_cases; ++c) {
    Bitset s = random_subset(n, rng);
    int i = rng.uniform_int(n);
    s.reset(i);
    if (f.value(s.with(i)) < f.value(s) - slack)
      return {false, "monotonicity violated on a sampled case"};
  }
  return {true, ""};
}

ValidationReport check_nonnegative(const SetFunction& f, int sample_cases,
                                   std::uint64_t seed) {
  const int n = f.n();
  if (n <= 16) {
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
      if (f.value(Bitset::from_mask(n, m)) < -1e-9)
        return {false, "negative value at mask " + std::to_string(m)};
    }
    return {true, ""};
  }
  Rng rng(seed);
  for (int c = 0; c < sample_cases; ++c) {
    if (f.value(random_subset(n, rng)) < -1e-9)
      return {false, "negative value on a sampled case"};
  }
  return {true, ""};
}

}  // namespace spi
