#include "core/random_instances.hpp"

namespace spi {

SetFunction random_coverage(int n, Rng& rng) {
  int items = n + 1 + rng.uniform_int(n + 2);
  std::vector<std::vector<int>> covers(n);
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < items; ++t)
      if (rng.bernoulli(0.4)) covers[i].push_back(t);
  }
  std::vector<double> w(items);
  for (double& v : w) v = rng.uniform(0.1, 1.0);
  return SetFunction::coverage(make_ground(n), std::move(covers), std::move(w));
}

SetFunction random_cut(int n, Rng& rng) {
  std::vector<Arc> arcs;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      if (rng.bernoulli(0.35)) arcs.push_back({u, v, rng.uniform(0.1, 1.0)});
    }
  return SetFunction::directed_cut(make_ground(n), std::move(arcs));
}

SetFunction random_mixture(int n, Rng& rng) {
  return SetFunction::sum(random_coverage(n, rng), random_cut(n, rng),
                          rng.uniform(0.2, 1.0), rng.uniform(0.2, 1.0));
}

std::vector<double> random_point(int n, Rng& rng) {
  std::vector<double> x(n);
  for (double& v : x) v = rng.uniform();
  return x;
}

Bitset random_subset(int n, Rng& rng, double density) {
  Bitset s(n);
  for (int i = 0; i < n; ++i)
    if (rng.bernoulli(density)) s.set(i);
  return s;
}

SetFunction shifted(const SetFunction& f, const Bitset& base) {
  SetFunction captured = f;
  Bitset b = base;
  return SetFunction::custom(
      f.ground(), f.is_monotone(), FnKind::custom,
      [captured, b](const Bitset& s) { return captured.value(s | b); });
}

}  // namespace spi
