#pragma once

#include <span>
#include <vector>

#include "core/set_function.hpp"

namespace spi {

// Exact multilinear extension by subset enumeration.  Collapse-structured
// functions are evaluated through their base marginals, so the enumeration
// dimension is the base ground size; that dimension must be <= 24.
double multilinear_exact(const SetFunction& f, std::span<const double> x);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Sample mean of f over independent draws; per-trial streams derived from
// (seed, trial) so the result is independent of evaluation order.
McEstimate multilinear_mc(const SetFunction& f, std::span<const double> x,
                          long trials, std::uint64_t seed);

struct ConcaveTerm {
  double weight = 0.0;
  Bitset set;
};

// Basic feasible maximizer of the concave closure LP: at most n+1 terms with
// positive weight, weights summing to one, marginals matching x.
struct ConcaveDecomposition {
  std::vector<ConcaveTerm> terms;
  double value = 0.0;
};

// Needs n <= 12 (the LP enumerates all 2^n columns).
ConcaveDecomposition concave_closure(const SetFunction& f,
                                     std::span<const double> x);
double concave_closure_value(const SetFunction& f, std::span<const double> x);

// max of f over subsets of s; needs |s| <= 22.
double f_max_value(const SetFunction& f, const Bitset& s);

// Per-element r with 1 - (1 - r_i) * prod_{terms covering i} (1 - q_j) = x_i.
// Requires every term weight < 1; guarantees 0 <= r_i <= x_i.
std::vector<double> rebalance_r(const ConcaveDecomposition& dec,
                                std::span<const double> x);

// Hard gap instance: n spoke elements plus one hub (last index); the value is
// 1 for any non-empty set avoiding the hub, else 0.  The paired point puts
// (1-p)/n on each spoke and p on the hub.
struct StarInstance {
  SetFunction f;
  std::vector<double> x;
};
StarInstance star_instance(int n, double p);

// Closed forms for the star instance at its paired point; valid for any n.
struct StarStats {
  double multilinear = 0.0;
  double closure = 0.0;
  double ratio = 0.0;
};
StarStats star_stats(int n, double p);

// multilinear / closure with the convention 1 when the closure is zero.
// Needs n <= 12.
double gap_ratio(const SetFunction& f, std::span<const double> x);

}  // namespace spi
