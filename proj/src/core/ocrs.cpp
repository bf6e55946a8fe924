#include "core/ocrs.hpp"

#include <cmath>

#include "core/error.hpp"

namespace spi {

GreedyOcrs::GreedyOcrs(ConstraintFamily family, double b,
                       std::vector<double> x, std::uint64_t seed)
    : family_(std::move(family)),
      b_(b),
      x_(std::move(x)),
      seed_(seed),
      accepted_(family_.n()),
      offered_(family_.n()) {
  require(family_.valid(), Errc::invalid_argument, "empty constraint family");
  require(b_ >= 0.0 && b_ <= 1.0, Errc::invalid_argument, "b must be in [0,1]");
  require(family_.in_scaled_polytope(x_, b_), Errc::not_in_polytope,
          "x does not lie in b * P");
}

bool GreedyOcrs::family_member(const Bitset& s) const {
  return family_.is_independent(s);
}

bool GreedyOcrs::offer(int element, bool active) {
  require(element >= 0 && element < n(), Errc::invalid_argument,
          "element out of range");
  require(!offered_.test(element), Errc::duplicate_offer,
          "element offered twice");
  offered_.set(element);
  if (!active) return false;
  Bitset cand = accepted_.with(element);
  if (!family_member(cand)) return false;
  accepted_ = cand;
  return true;
}

void GreedyOcrs::reset() {
  accepted_.clear();
  offered_.clear();
}

Bitset GreedyOcrs::addable_core(const Bitset& a) const {
  require(a.size() == n(), Errc::dimension_mismatch, "set size mismatch");
  auto idx = a.to_vector();
  require(idx.size() <= 20, Errc::subset_too_large,
          "addable core needs |A| <= 20");
  Bitset core = a;
  Bitset sub(n());
  const std::uint64_t lim = std::uint64_t{1} << idx.size();
  for (std::uint64_t m = 0; m < lim; ++m) {
    sub.clear();
    for (size_t j = 0; j < idx.size(); ++j)
      if ((m >> j) & 1) sub.set(idx[j]);
    if (!family_member(sub)) continue;
    for (size_t j = 0; j < idx.size(); ++j) {
      int e = idx[j];
      if (sub.test(e) || !core.test(e)) continue;
      if (!family_member(sub.with(e))) core.reset(e);
    }
  }
  return core;
}

Bitset lift_day_selection(const GreedyOcrs& day_scheme, const Blowup& blowup,
                          const Bitset& universe_set) {
  require(universe_set.size() == blowup.lifted_n, Errc::dimension_mismatch,
          "universe set size mismatch");
  Bitset days = blowup.project(universe_set);
  Bitset core = day_scheme.addable_core(days);
  Bitset out(blowup.lifted_n);
  core.for_each([&](int day) {
    int chosen = -1;
    int cnt = 0;
    for (int e : blowup.parts[day]) {
      if (universe_set.test(e)) {
        chosen = e;
        ++cnt;
      }
    }
    if (cnt == 1) out.set(chosen);
  });
  return out;
}

std::vector<ElementEstimate> estimate_selectability(
    const ConstraintFamily& family, double b, std::span<const double> x,
    long trials, std::uint64_t seed) {
  const int n = family.n();
  require(static_cast<int>(x.size()) == n, Errc::dimension_mismatch,
          "x size mismatch");
  require(trials > 0, Errc::invalid_argument, "trials must be positive");
  require(family.in_scaled_polytope(x, b), Errc::not_in_polytope,
          "x does not lie in b * P");

  std::vector<long> hits(n, 0);
  Bitset active(n), sub(n);
  std::vector<char> fails(n);
  for (long t = 0; t < trials; ++t) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t));
    active.clear();
    for (int i = 0; i < n; ++i)
      if (rng.uniform() < x[i]) active.set(i);
    auto idx = active.to_vector();
    require(idx.size() <= 20, Errc::subset_too_large,
            "active set too large for the exhaustive core check");
    std::fill(fails.begin(), fails.end(), 0);
    const std::uint64_t lim = std::uint64_t{1} << idx.size();
    for (std::uint64_t m = 0; m < lim; ++m) {
      sub.clear();
      for (size_t j = 0; j < idx.size(); ++j)
        if ((m >> j) & 1) sub.set(idx[j]);
      if (!family.is_independent(sub)) continue;
      for (int e = 0; e < n; ++e) {
        if (fails[e] || sub.test(e)) continue;
        if (!family.is_independent(sub.with(e))) fails[e] = 1;
      }
    }
    for (int e = 0; e < n; ++e)
      if (!fails[e]) ++hits[e];
  }

  std::vector<ElementEstimate> out(n);
  for (int e = 0; e < n; ++e) {
    double p = static_cast<double>(hits[e]) / static_cast<double>(trials);
    out[e].estimate = p;
    out[e].std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  }
  return out;
}

double day_gamma(std::span<const double> z, const Blowup& blowup) {
  require(static_cast<int>(z.size()) == blowup.lifted_n,
          Errc::dimension_mismatch, "z size mismatch");
  double best = 1.0;
  for (int day = 0; day < blowup.base_n; ++day) {
    double prod = 1.0;
    for (int e : blowup.parts[day]) {
      require(z[e] < 1.0 - 1e-12, Errc::saturated_coordinate,
              "marginal saturated at 1");
      require(z[e] >= 0.0, Errc::invalid_argument, "negative marginal");
      prod *= 1.0 - z[e];
    }
    best = std::min(best, prod);
  }
  return best;
}

}  // namespace spi
