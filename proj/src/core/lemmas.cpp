#include "core/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "core/error.hpp"
#include "core/random_instances.hpp"
#include "core/rng.hpp"
#include "core/submodular.hpp"

namespace spi {

namespace {

constexpr double kSlack = 1e-9;

void record(LemmaReport& rep, double lhs, double rhs) {
  double slack = lhs - rhs;
  if (rep.cases == 0 || slack < rep.min_slack) rep.min_slack = slack;
  ++rep.cases;
  if (slack < -kSlack) ++rep.violations;
}

// Correlated sampler over subsets of `domain`: L equally likely atoms, each
// element on in a chosen slice of them.  Marginal of element i = |slice_i|/L.
struct AtomDistribution {
  std::vector<Bitset> atoms;  // each with probability 1/L
  double expectation(const SetFunction& g) const {
    double v = 0.0;
    for (const auto& a : atoms) v += g.value(a);
    return v / static_cast<double>(atoms.size());
  }
};

AtomDistribution correlated_atoms(int n, const std::vector<int>& domain,
                                  const std::vector<int>& slice_sizes, int L,
                                  Rng& rng) {
  AtomDistribution d;
  d.atoms.assign(L, Bitset(n));
  std::vector<int> slots(L);
  std::iota(slots.begin(), slots.end(), 0);
  for (size_t t = 0; t < domain.size(); ++t) {
    // Random slice of exactly slice_sizes[t] atoms.
    for (int j = L - 1; j > 0; --j)
      std::swap(slots[j], slots[rng.uniform_int(j + 1)]);
    for (int j = 0; j < slice_sizes[t]; ++j)
      d.atoms[slots[j]].set(domain[t]);
  }
  return d;
}

}  // namespace

LemmaReport check_correlated_floor(std::uint64_t seed, int cases) {
  LemmaReport rep{"correlated-sampling-floor"};
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    int n = 3 + rng.uniform_int(4);
    SetFunction f = random_mixture(n, rng);
    SetFunction g = shifted(f, random_subset(n, rng));
    auto domain = random_subset(n, rng, 0.7).to_vector();
    int L = 3 + rng.uniform_int(6);
    std::vector<int> sizes(domain.size());
    int max_size = 0;
    for (auto& s : sizes) {
      s = rng.uniform_int(L + 1);
      max_size = std::max(max_size, s);
    }
    double p = domain.empty() ? 0.0
                              : static_cast<double>(max_size) / L;
    auto dist = correlated_atoms(n, domain, sizes, L, rng);
    double lhs = dist.expectation(g);
    double rhs = (1.0 - p) * g.value(Bitset(n));
    record(rep, lhs, rhs);
  }
  return rep;
}

LemmaReport check_exact_rate_floor(std::uint64_t seed, int cases) {
  LemmaReport rep{"exact-rate-sampling-floor"};
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    int n = 3 + rng.uniform_int(4);
    SetFunction f = random_mixture(n, rng);
    SetFunction g = shifted(f, random_subset(n, rng));
    auto domain = random_subset(n, rng, 0.7).to_vector();
    int L = 3 + rng.uniform_int(6);
    int j = rng.uniform_int(L + 1);
    double p = static_cast<double>(j) / L;
    std::vector<int> sizes(domain.size(), j);
    auto dist = correlated_atoms(n, domain, sizes, L, rng);
    Bitset full(n);
    for (int e : domain) full.set(e);
    double lhs = dist.expectation(g);
    double rhs = (1.0 - p) * g.value(Bitset(n)) + p * g.value(full);
    record(rep, lhs, rhs);
  }
  return rep;
}

LemmaReport check_pair_union_floor(std::uint64_t seed, int cases) {
  LemmaReport rep{"pair-union-floor"};
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    int n = 3 + rng.uniform_int(4);
    SetFunction f = random_mixture(n, rng);
    SetFunction g = shifted(f, random_subset(n, rng, 0.3));
    auto a = random_subset(n, rng, 0.6);
    auto b = random_subset(n, rng, 0.6);
    double p = rng.uniform();
    double q = rng.uniform();
    auto ai = a.to_vector();
    auto bi = b.to_vector();
    double lhs = 0.0;
    for (std::uint64_t ma = 0; ma < (std::uint64_t{1} << ai.size()); ++ma) {
      double wa = 1.0;
      Bitset sa(n);
      for (size_t t = 0; t < ai.size(); ++t) {
        if ((ma >> t) & 1) {
          wa *= p;
          sa.set(ai[t]);
        } else {
          wa *= 1.0 - p;
        }
      }
      for (std::uint64_t mb = 0; mb < (std::uint64_t{1} << bi.size()); ++mb) {
        double w = wa;
        Bitset s = sa;
        for (size_t t = 0; t < bi.size(); ++t) {
          if ((mb >> t) & 1) {
            w *= q;
            s.set(bi[t]);
          } else {
            w *= 1.0 - q;
          }
        }
        lhs += w * g.value(s);
      }
    }
    double rhs = (1 - p) * (1 - q) * g.value(Bitset(n)) +
                 p * (1 - q) * g.value(a) + (1 - p) * q * g.value(b) +
                 p * q * g.value(a | b);
    record(rep, lhs, rhs);
  }
  return rep;
}

LemmaReport check_multi_union_floor(std::uint64_t seed, int cases) {
  LemmaReport rep{"multi-union-floor"};
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    int n = 3 + rng.uniform_int(4);
    SetFunction f = random_mixture(n, rng);
    SetFunction g = shifted(f, random_subset(n, rng, 0.3));
    int k = 1 + rng.uniform_int(3);
    std::vector<std::vector<int>> sets(k);
    std::vector<double> probs(k);
    int total_slots = 0;
    for (int i = 0; i < k; ++i) {
      auto s = random_subset(n, rng, 0.5).to_vector();
      while (s.size() > 4) s.erase(s.begin() + rng.uniform_int((int)s.size()));
      total_slots += static_cast<int>(s.size());
      sets[i] = std::move(s);
      probs[i] = rng.uniform();
    }
    // Direct expectation over every outcome of the per-element coins.
    double lhs = 0.0;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << total_slots); ++m) {
      double w = 1.0;
      Bitset u(n);
      int slot = 0;
      for (int i = 0; i < k; ++i)
        for (int e : sets[i]) {
          if ((m >> slot) & 1) {
            w *= probs[i];
            u.set(e);
          } else {
            w *= 1.0 - probs[i];
          }
          ++slot;
        }
      lhs += w * g.value(u);
    }
    double rhs = 0.0;
    for (std::uint64_t im = 0; im < (std::uint64_t{1} << k); ++im) {
      double w = 1.0;
      Bitset u(n);
      for (int i = 0; i < k; ++i) {
        if ((im >> i) & 1) {
          w *= probs[i];
          for (int e : sets[i]) u.set(e);
        } else {
          w *= 1.0 - probs[i];
        }
      }
      rhs += w * g.value(u);
    }
    record(rep, lhs, rhs);
  }
  return rep;
}

LemmaReport check_weighted_prefix_floor(std::uint64_t seed, int cases) {
  LemmaReport rep{"weighted-prefix-floor"};
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    int m = 1 + rng.uniform_int(20);
    std::vector<double> a(m), q(m);
    for (double& v : a) v = rng.uniform();
    std::sort(a.begin(), a.end(), std::greater<>());
    double tot = 0.0;
    for (double& v : q) {
      v = rng.uniform(1e-3, 1.0);
      tot += v;
    }
    for (double& v : q) v /= tot;  // exactly on the simplex
    double lhs = 0.0, run = 1.0, rhs = 0.0;
    for (int i = 0; i < m; ++i) {
      lhs += q[i] * a[i] * run;
      run *= 1.0 - q[i];
      rhs += q[i] * a[i];
    }
    record(rep, lhs, (1.0 - std::exp(-1.0)) * rhs);
  }
  return rep;
}

std::vector<LemmaReport> verify_sampling_lemmas(std::uint64_t seed,
                                                int cases_each) {
  return {
      check_correlated_floor(seed + 1, cases_each),
      check_exact_rate_floor(seed + 2, cases_each),
      check_pair_union_floor(seed + 3, cases_each),
      check_multi_union_floor(seed + 4, cases_each),
      check_weighted_prefix_floor(seed + 5, cases_each),
  };
}

bool all_pass(const std::vector<LemmaReport>& reports) {
  for (const auto& r : reports)
    if (!r.pass()) return false;
  return true;
}

GapCheckReport verify_correlation_gap(int cases, int n_max,
                                      std::uint64_t seed) {
  require(cases > 0, Errc::invalid_argument, "cases must be positive");
  require(n_max >= 2 && n_max <= 12, Errc::ground_set_too_large,
          "gap check needs 2 <= n_max <= 12");
  GapCheckReport rep;
  rep.min_slack = std::numeric_limits<double>::infinity();
  const double share = 1.0 - std::exp(-1.0);
  for (int c = 0; c < cases; ++c) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(c));
    const int n = 2 + rng.uniform_int(n_max - 1);
    SetFunction f;
    switch (c % 3) {
      case 0: f = random_coverage(n, rng); break;
      case 1: f = random_cut(n, rng); break;
      default: f = random_mixture(n, rng); break;
    }
    const std::vector<double> x = random_point(n, rng);
    double p = 0.0;
    for (double xi : x) p = std::max(p, xi);
    const double val = multilinear_exact(f, x);
    const double closure = concave_closure_value(f, x);
    const double slack = val - (1.0 - p) * share * closure;
    ++rep.cases;
    rep.min_slack = std::min(rep.min_slack, slack);
    if (closure > 1e-12)
      rep.min_ratio = std::min(rep.min_ratio, val / closure);
    if (slack < -kSlack) ++rep.violations;
  }
  return rep;
}

}  // namespace spi
