#include "core/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "core/error.hpp"

namespace spi {

namespace {

// Union-find over graph vertices, used for forest checks.
struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  // false if already joined
  bool join(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

struct ConstraintFamily::Impl {
  ConstraintKind kind = ConstraintKind::uniform;
  int n = 0;
  bool matroid = false;

  int k = 0;  // uniform

  std::vector<std::vector<int>> parts;  // partition
  std::vector<int> caps;
  std::vector<int> part_of;

  int vertices = 0;  // graphic / matching
  std::vector<std::pair<int, int>> edges;

  std::vector<Bitset> family;  // explicit
  std::unordered_set<std::uint64_t> family_masks;

  std::vector<double> weights;  // knapsack
  double capacity = 0.0;

  std::shared_ptr<const ConstraintFamily> base;  // partition_extension
  Blowup blowup;
};

const char* constraint_kind_name(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::uniform: return "uniform";
    case ConstraintKind::partition: return "partition";
    case ConstraintKind::graphic: return "graphic";
    case ConstraintKind::explicit_family: return "explicit";
    case ConstraintKind::matching: return "matching";
    case ConstraintKind::knapsack: return "knapsack";
    case ConstraintKind::partition_extension: return "partition-extension";
  }
  return "?";
}

Blowup Blowup::from_parts(std::vector<std::vector<int>> parts_in) {
  Blowup b;
  b.parts = std::move(parts_in);
  b.base_n = static_cast<int>(b.parts.size());
  int total = 0;
  for (const auto& p : b.parts) total += static_cast<int>(p.size());
  b.lifted_n = total;
  b.part_of.assign(total, -1);
  for (int day = 0; day < b.base_n; ++day) {
    for (int e : b.parts[day]) {
      require(e >= 0 && e < total, Errc::invalid_argument,
              "blowup element out of range");
      require(b.part_of[e] < 0, Errc::invalid_argument,
              "blowup element listed twice");
      b.part_of[e] = day;
    }
  }
  for (int e = 0; e < total; ++e)
    require(b.part_of[e] >= 0, Errc::invalid_argument,
            "blowup element missing from all days");
  return b;
}

Bitset Blowup::project(const Bitset& lifted) const {
  require(lifted.size() == lifted_n, Errc::dimension_mismatch,
          "projection size mismatch");
  Bitset days(base_n);
  lifted.for_each([&](int e) { days.set(part_of[e]); });
  return days;
}

int ConstraintFamily::n() const { return impl_ ? impl_->n : 0; }

ConstraintKind ConstraintFamily::kind() const {
  require(impl_ != nullptr, Errc::invalid_argument, "empty constraint family");
  return impl_->kind;
}

bool ConstraintFamily::is_matroid() const { return impl_ && impl_->matroid; }

bool ConstraintFamily::is_independent(const Bitset& s) const {
  require(impl_ != nullptr, Errc::invalid_argument, "empty constraint family");
  require(s.size() == impl_->n, Errc::dimension_mismatch,
          "subset size mismatch");
  const Impl& im = *impl_;
  switch (im.kind) {
    case ConstraintKind::uniform:
      return s.count() <= im.k;
    case ConstraintKind::partition: {
      std::vector<int> cnt(im.parts.size(), 0);
      bool ok = true;
      s.for_each([&](int i) {
        if (++cnt[im.part_of[i]] > im.caps[im.part_of[i]]) ok = false;
      });
      return ok;
    }
    case ConstraintKind::graphic: {
      UnionFind uf(im.vertices);
      bool ok = true;
      s.for_each([&](int e) {
        if (ok && !uf.join(im.edges[e].first, im.edges[e].second)) ok = false;
      });
      return ok;
    }
    case ConstraintKind::explicit_family:
      return im.family_masks.count(s.low_mask()) > 0;
    case ConstraintKind::matching: {
      std::vector<char> used(im.vertices, 0);
      bool ok = true;
      s.for_each([&](int e) {
        auto [u, v] = im.edges[e];
        if (used[u] || used[v]) ok = false;
        used[u] = used[v] = 1;
      });
      return ok;
    }
    case ConstraintKind::knapsack: {
      double w = 0.0;
      s.for_each([&](int i) { w += im.weights[i]; });
      return w <= im.capacity + 1e-12;
    }
    case ConstraintKind::partition_extension: {
      std::vector<int> cnt(im.blowup.base_n, 0);
      bool ok = true;
      s.for_each([&](int e) {
        if (++cnt[im.blowup.part_of[e]] > 1) ok = false;
      });
      if (!ok) return false;
      return im.base->is_independent(im.blowup.project(s));
    }
  }
  return false;
}

int ConstraintFamily::rank(const Bitset& s) const {
  Bitset sel(n());
  int r = 0;
  s.for_each([&](int i) {
    Bitset cand = sel.with(i);
    if (is_independent(cand)) {
      sel = cand;
      ++r;
    }
  });
  return r;
}

int ConstraintFamily::rank_ground() const { return rank(Bitset::full(n())); }

LinOpt ConstraintFamily::linear_optimize(std::span<const double> w) const {
  require(impl_ != nullptr, Errc::invalid_argument, "empty constraint family");
  const Impl& im = *impl_;
  require(static_cast<int>(w.size()) == im.n, Errc::dimension_mismatch,
          "weight size mismatch");
  LinOpt out;
  out.vertex.assign(im.n, 0.0);
  switch (im.kind) {
    case ConstraintKind::uniform:
    case ConstraintKind::partition:
    case ConstraintKind::graphic:
    case ConstraintKind::explicit_family:
    case ConstraintKind::partition_extension: {
      require(im.matroid, Errc::invalid_argument,
              "greedy optimization needs a matroid family");
      std::vector<int> order(im.n);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return w[a] > w[b]; });
      Bitset sel(im.n);
      for (int i : order) {
        if (w[i] <= 0.0) break;
        Bitset cand = sel.with(i);
        if (is_independent(cand)) {
          sel = cand;
          out.vertex[i] = 1.0;
          out.value += w[i];
        }
      }
      return out;
    }
    case ConstraintKind::matching: {
      // Exact search over matchings restricted to positive-weight edges.
      require(im.n <= 24, Errc::ground_set_too_large,
              "matching optimization needs at most 24 edges");
      std::vector<int> cand;
      for (int e = 0; e < im.n; ++e)
        if (w[e] > 0.0) cand.push_back(e);
      double best = 0.0;
      std::uint64_t best_mask = 0;
      std::vector<char> used(im.vertices, 0);
      std::uint64_t cur_mask = 0;
      double cur = 0.0;
      auto rec = [&](auto&& self, size_t idx) -> void {
        if (cur > best) {
          best = cur;
          best_mask = cur_mask;
        }
        for (size_t t = idx; t < cand.size(); ++t) {
          int e = cand[t];
          auto [u, v] = im.edges[e];
          if (used[u] || used[v]) continue;
          used[u] = used[v] = 1;
          cur += w[e];
          cur_mask |= std::uint64_t{1} << e;
          self(self, t + 1);
          used[u] = used[v] = 0;
          cur -= w[e];
          cur_mask &= ~(std::uint64_t{1} << e);
        }
      };
      rec(rec, 0);
      for (int e = 0; e < im.n; ++e)
        if (best_mask & (std::uint64_t{1} << e)) out.vertex[e] = 1.0;
      out.value = best;
      return out;
    }
    case ConstraintKind::knapsack: {
      // Fractional greedy by density; zero-weight items ride for free.
      double cap = im.capacity;
      std::vector<int> order;
      for (int i = 0; i < im.n; ++i) {
        if (w[i] <= 0.0) continue;
        if (im.weights[i] <= 1e-15) {
          out.vertex[i] = 1.0;
          out.value += w[i];
        } else {
          order.push_back(i);
        }
      }
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return w[a] / im.weights[a] > w[b] / im.weights[b];
      });
      for (int i : order) {
        if (cap <= 0.0) break;
        double take = std::min(1.0, cap / im.weights[i]);
        out.vertex[i] = take;
        out.value += take * w[i];
        cap -= take * im.weights[i];
      }
      return out;
    }
  }
  fail(Errc::internal, "unhandled constraint kind");
}

bool ConstraintFamily::in_scaled_polytope(std::span<const double> x, double b,
                                          double tol) const {
  require(impl_ != nullptr, Errc::invalid_argument, "empty constraint family");
  const Impl& im = *impl_;
  require(static_cast<int>(x.size()) == im.n, Errc::dimension_mismatch,
          "point size mismatch");
  require(b >= 0.0, Errc::invalid_argument, "scale must be >= 0");
  for (double v : x)
    if (v < -tol) return false;
  switch (im.kind) {
    case ConstraintKind::uniform:
    case ConstraintKind::partition: {
      // Separable closed form: sorted prefix sums against scaled caps.
      auto prefix_ok = [&](std::vector<double> vals, int cap) {
        std::sort(vals.begin(), vals.end(), std::greater<>());
        double run = 0.0;
        for (size_t s = 0; s < vals.size(); ++s) {
          run += vals[s];
          int allowed = std::min(static_cast<int>(s) + 1, cap);
          if (run > b * allowed + tol) return false;
        }
        return true;
      };
      if (im.kind == ConstraintKind::uniform)
        return prefix_ok(std::vector<double>(x.begin(), x.end()), im.k);
      for (size_t j = 0; j < im.parts.size(); ++j) {
        std::vector<double> vals;
        for (int i : im.parts[j]) vals.push_back(x[i]);
        if (!prefix_ok(std::move(vals), im.caps[j])) return false;
      }
      return true;
    }
    case ConstraintKind::graphic:
    case ConstraintKind::explicit_family: {
      require(im.n <= 16, Errc::ground_set_too_large,
              "rank inequality check needs n <= 16");
      for (std::uint64_t m = 1; m < (std::uint64_t{1} << im.n); ++m) {
        Bitset s = Bitset::from_mask(im.n, m);
        double sum = 0.0;
        s.for_each([&](int i) { sum += x[i]; });
        if (sum > b * rank(s) + tol) return false;
      }
      return true;
    }
    case ConstraintKind::matching: {
      std::vector<double> deg(im.vertices, 0.0);
      for (int e = 0; e < im.n; ++e) {
        deg[im.edges[e].first] += x[e];
        deg[im.edges[e].second] += x[e];
      }
      for (double d : deg)
        if (d > b + tol) return false;
      return true;
    }
    case ConstraintKind::knapsack: {
      double tot = 0.0;
      for (int i = 0; i < im.n; ++i) {
        if (x[i] > b + tol) return false;
        tot += x[i] * im.weights[i];
      }
      return tot <= b * im.capacity + tol;
    }
    case ConstraintKind::partition_extension: {
      std::vector<double> day(im.blowup.base_n, 0.0);
      for (int e = 0; e < im.n; ++e) day[im.blowup.part_of[e]] += x[e];
      return im.base->in_scaled_polytope(day, b, tol);
    }
  }
  return false;
}

ConstraintFamily ConstraintFamily::uniform(int n, int k) {
  require(n >= 0 && k >= 0, Errc::invalid_argument, "uniform needs n,k >= 0");
  auto im = std::make_shared<Impl>();
  im->kind = ConstraintKind::uniform;
  im->n = n;
  im->k = k;
  im->matroid = true;
  return ConstraintFamily(std::move(im));
}

ConstraintFamily ConstraintFamily::partition(
    int n, std::vector<std::vector<int>> parts, std::vector<int> caps) {
  require(parts.size() == caps.size(), Errc::dimension_mismatch,
          "parts/caps size mismatch");
  auto im = std::make_shared<Impl>();
  im->kind = ConstraintKind::partition;
  im->n = n;
  im->parts = std::move(parts);
  im->caps = std::move(caps);
  im->part_of.assign(n, -1);
  for (size_t j = 0; j < im->parts.size(); ++j) {
    require(im->caps[j] >= 0, Errc::invalid_argument, "negative cap");
    for (int i : im->parts[j]) {
      require(i >= 0 && i < n, Errc::invalid_argument, "part element range");
      require(im->part_of[i] < 0, Errc::invalid_argument,
              "element in two parts");
      im->part_of[i] = static_cast<int>(j);
    }
  }
  for (int i = 0; i < n; ++i)
    require(im->part_of[i] >= 0, Errc::invalid_argument,
            "element missing from parts");
  im->matroid = true;
  return ConstraintFamily(std::move(im));
}

ConstraintFamily ConstraintFamily::graphic(
    int vertices, std::vector<std::pair<int, int>> edges) {
  auto im = std::make_shared<Impl>();
  im->kind = ConstraintKind::graphic;
  im->n = static_cast<int>(edges.size());
  im->vertices = vertices;
  for (auto [u, v] : edges)
    require(u >= 0 && u < vertices && v >= 0 && v < vertices,
            Errc::invalid_argument, "edge endpoint out of range");
  im->edges = std::move(edges);
  im->matroid = true;
  return ConstraintFamily(std::move(im));
}

ConstraintFamily ConstraintFamily::explicit_family(int n,
                                                   std::vector<Bitset> sets) {
  require(n <= 60, Errc::ground_set_too_large, "explicit family needs n <= 60");
  auto im = std::make_shared<Impl>();
  im->kind = ConstraintKind::explicit_family;
  im->n = n;
  for (auto& s : sets) {
    require(s.size() == n, Errc::dimension_mismatch, "family set size");
    im->family_masks.insert(s.low_mask());
  }
  im->family_masks.insert(0);  // empty set always independent
  im->family = std::move(sets);
  // Downward closure is required, not inferred.
  for (std::uint64_t m : im->family_masks) {
    for (int i = 0; i < n; ++i) {
      if (!(m & (std::uint64_t{1} << i))) continue;
      require(im->family_masks.count(m & ~(std::uint64_t{1} << i)) > 0,
              Errc::invalid_argument, "explicit family not downward closed");
    }
  }
  // Exchange check (exhaustive when affordable, sampled spot check beyond).
  auto masks = std::vector<std::uint64_t>(im->family_masks.begin(),
                                          im->family_masks.end());
  std::sort(masks.begin(), masks.end());
  auto exchange_ok = [&](std::uint64_t a, std::uint64_t bmask) {
    if (__builtin_popcountll(a) >= __builtin_popcountll(bmask)) return true;
    std::uint64_t diff = bmask & ~a;
    while (diff) {
      std::uint64_t bit = diff & (~diff + 1);
      if (im->family_masks.count(a | bit)) return true;
      diff &= diff - 1;
    }
    return false;
  };
  const size_t fam = masks.size();
  if (fam * fam <= 4000000) {
    for (std::uint64_t a : masks)
      for (std::uint64_t bm : masks)
        require(exchange_ok(a, bm), Errc::invalid_argument,
                "explicit family fails the matroid exchange property");
  }
  im->matroid = true;
  return ConstraintFamily(std::move(im));
}

ConstraintFamily ConstraintFamily::matching(
    int vertices, std::vector<std::pair<int, int>> edges) {
  auto im = std::make_shared<Impl>();
  im->kind = ConstraintKind::matching;
  im->n = static_cast<int>(edges.size());
  im->vertices = vertices;
  for (auto [u, v] : edges) {
    require(u >= 0 && u < vertices && v >= 0 && v < vertices,
            Errc::invalid_argument, "edge endpoint out of range");
    require(u != v, Errc::invalid_argument, "self loop edge");
  }
  im->edges = std::move(edges);
  im->matroid = false;
  return ConstraintFamily(std::move(im));
}

ConstraintFamily ConstraintFamily::knapsack(std::vector<double> weights,
                                            double capacity) {
  require(capacity >= 0.0, Errc::invalid_argument, "negative capacity");
  auto im = std::make_shared<Impl>();
  im->kind = ConstraintKind::knapsack;
  im->n = static_cast<int>(weights.size());
  for (double w : weights)
    require(w >= 0.0, Errc::invalid_argument, "negative item weight");
  im->weights = std::move(weights);
  im->capacity = capacity;
  im->matroid = false;
  return ConstraintFamily(std::move(im));
}

ConstraintFamily ConstraintFamily::partition_extension(ConstraintFamily base,
                                                       Blowup blowup) {
  require(base.valid(), Errc::invalid_argument, "empty base family");
  require(base.n() == blowup.base_n, Errc::dimension_mismatch,
          "blowup day count mismatch");
  auto im = std::make_shared<Impl>();
  im->kind = ConstraintKind::partition_extension;
  im->n = blowup.lifted_n;
  im->matroid = base.is_matroid();
  im->base = std::make_shared<ConstraintFamily>(std::move(base));
  im->blowup = std::move(blowup);
  return ConstraintFamily(std::move(im));
}

const ConstraintFamily* ConstraintFamily::extension_base() const {
  return impl_ && impl_->base ? impl_->base.get() : nullptr;
}

const Blowup* ConstraintFamily::extension_blowup() const {
  return impl_ && impl_->kind == ConstraintKind::partition_extension
             ? &impl_->blowup
             : nullptr;
}

int ConstraintFamily::uniform_k() const {
  require(impl_ && impl_->kind == ConstraintKind::uniform,
          Errc::invalid_argument, "not a uniform family");
  return impl_->k;
}

const std::vector<std::vector<int>>& ConstraintFamily::parts() const {
  require(impl_ && impl_->kind == ConstraintKind::partition,
          Errc::invalid_argument, "not a partition family");
  return impl_->parts;
}

const std::vector<int>& ConstraintFamily::caps() const {
  require(impl_ && impl_->kind == ConstraintKind::partition,
          Errc::invalid_argument, "not a partition family");
  return impl_->caps;
}

int ConstraintFamily::vertices() const {
  require(impl_ && (impl_->kind == ConstraintKind::graphic ||
                    impl_->kind == ConstraintKind::matching),
          Errc::invalid_argument, "not an edge-ground family");
  return impl_->vertices;
}

const std::vector<std::pair<int, int>>& ConstraintFamily::edges() const {
  require(impl_ && (impl_->kind == ConstraintKind::graphic ||
                    impl_->kind == ConstraintKind::matching),
          Errc::invalid_argument, "not an edge-ground family");
  return impl_->edges;
}

const std::vector<double>& ConstraintFamily::knapsack_weights() const {
  require(impl_ && impl_->kind == ConstraintKind::knapsack,
          Errc::invalid_argument, "not a knapsack family");
  return impl_->weights;
}

double ConstraintFamily::knapsack_capacity() const {
  require(impl_ && impl_->kind == ConstraintKind::knapsack,
          Errc::invalid_argument, "not a knapsack family");
  return impl_->capacity;
}

bool membership_p_prime(std::span<const double> z, const ConstraintFamily& days,
                        const Blowup& blowup, double b, double tol) {
  require(static_cast<int>(z.size()) == blowup.lifted_n,
          Errc::dimension_mismatch, "marginal vector size mismatch");
  for (double v : z)
    if (v < -tol || v > 1.0 + tol) return false;
  std::vector<double> day(blowup.base_n, 0.0);
  for (int e = 0; e < blowup.lifted_n; ++e) day[blowup.part_of[e]] += z[e];
  return days.in_scaled_polytope(day, b, tol);
}

bool membership_p_double_prime(std::span<const double> z,
                               std::span<const double> d,
                               const ConstraintFamily& days,
                               const Blowup& blowup, double b, double tol) {
  require(z.size() == d.size(), Errc::dimension_mismatch,
          "marginal/distribution size mismatch");
  for (size_t e = 0; e < z.size(); ++e)
    if (z[e] > d[e] + 1e-12) return false;
  return membership_p_prime(z, days, blowup, b, tol);
}

}  // namespace spi
