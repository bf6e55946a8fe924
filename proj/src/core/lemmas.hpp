#pragma once

#include <string>
#include <vector>

#include "core/set_function.hpp"

namespace spi {

struct LemmaReport {
  std::string name;
  int cases = 0;
  int violations = 0;
  double min_slack = 0.0;  // min of (lhs - rhs) over cases
  bool pass() const { return violations == 0; }
};

// Exact-expectation verification of the sampling inequalities used by the
// analysis.  All distributions are explicit and finite; nothing is estimated.

// E[g(A(p))] >= (1-p) g(empty) for correlated sampling with marginals <= p.
LemmaReport check_correlated_floor(std::uint64_t seed, int cases);
// E[g(A(p))] >= (1-p) g(empty) + p g(A) when every marginal is exactly p.
LemmaReport check_exact_rate_floor(std::uint64_t seed, int cases);
// Independent product samples of two overlapping sets.
LemmaReport check_pair_union_floor(std::uint64_t seed, int cases);
// Independent product samples of k sets against the 2^k mixture bound.
LemmaReport check_multi_union_floor(std::uint64_t seed, int cases);
// sum_k q_k a_k prod_{j<k} (1-q_j) >= (1-1/e) sum_k q_k a_k for
// non-increasing a and q in the probability simplex.
LemmaReport check_weighted_prefix_floor(std::uint64_t seed, int cases);

std::vector<LemmaReport> verify_sampling_lemmas(std::uint64_t seed,
                                                int cases_each);
bool all_pass(const std::vector<LemmaReport>& reports);

struct GapCheckReport {
  int cases = 0;
  int violations = 0;
  double min_slack = 0.0;  // min of F(x) - (1-p)(1-1/e) f+(x)
  double min_ratio = 1.0;  // min of F(x) / f+(x), ignoring zero closures
  bool pass() const { return violations == 0; }
};

// Random mixtures of coverage and cut objectives at random points, exact
// multilinear value against the (1-p)(1-1/e) share of the concave closure.
// Needs n_max <= 12 for the closure LP.
GapCheckReport verify_correlation_gap(int cases, int n_max, std::uint64_t seed);

}  // namespace spi
