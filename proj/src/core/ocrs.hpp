#pragma once

#include <vector>

#include "core/constraints.hpp"
#include "core/rng.hpp"

namespace spi {

// Greedy online contention resolution: elements arrive in adversarial order,
// an active element is accepted iff the accepted set stays inside the
// instantiated subfamily.  For the shipped kinds the subfamily is the
// constraint family itself (cardinality and per-part caps are already
// selectable; everything else falls back to the family and is measured
// empirically).  Any randomness of the instantiation is fixed at
// construction from the seed.
class GreedyOcrs {
 public:
  GreedyOcrs(ConstraintFamily family, double b, std::vector<double> x,
             std::uint64_t seed);

  int n() const { return family_.n(); }
  double b() const { return b_; }
  const std::vector<double>& x() const { return x_; }
  const ConstraintFamily& family() const { return family_; }

  bool family_member(const Bitset& s) const;

  // Feed the next element; true iff accepted.  Each element at most once per
  // run.
  bool offer(int element, bool active);
  const Bitset& accepted() const { return accepted_; }
  const Bitset& offered() const { return offered_; }
  void reset();

  // Elements of `a` that can be added to every independent subset of `a`:
  // whatever the adversarial order, the greedy run keeps them.  Exhaustive
  // over subsets; needs |a| <= 20.
  Bitset addable_core(const Bitset& a) const;

 private:
  ConstraintFamily family_;
  double b_ = 0.0;
  std::vector<double> x_;
  std::uint64_t seed_ = 0;
  Bitset accepted_, offered_;
};

// Day-level selection lifted onto the universe: keep the chosen element of
// each day that lies in the addable core of the touched days and contributes
// exactly one element.
Bitset lift_day_selection(const GreedyOcrs& day_scheme, const Blowup& blowup,
                          const Bitset& universe_set);

struct ElementEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Per-element probability that the element survives every adversarial order
// when added to an active set drawn from x, estimated over `trials` draws.
std::vector<ElementEstimate> estimate_selectability(
    const ConstraintFamily& family, double b, std::span<const double> x,
    long trials, std::uint64_t seed);

// min over days of prod_{copies e} (1 - z_e); every z_e must stay below 1.
double day_gamma(std::span<const double> z, const Blowup& blowup);

}  // namespace spi
