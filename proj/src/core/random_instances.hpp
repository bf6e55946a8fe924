#pragma once

#include "core/rng.hpp"
#include "core/set_function.hpp"

namespace spi {

// Random normalized non-negative submodular functions at desk scale, used by
// randomized gap checks and property suites.
SetFunction random_coverage(int n, Rng& rng);
SetFunction random_cut(int n, Rng& rng);
// Weighted sum of a random coverage and a random cut part; non-monotone in
// general.
SetFunction random_mixture(int n, Rng& rng);

std::vector<double> random_point(int n, Rng& rng);
Bitset random_subset(int n, Rng& rng, double density = 0.5);

// g(S) = f(base | S) shifted onto the same ground set: g(S) = f(base union S).
// Submodular and non-negative but generally not normalized.
SetFunction shifted(const SetFunction& f, const Bitset& base);

}  // namespace spi
