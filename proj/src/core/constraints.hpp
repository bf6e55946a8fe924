#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "core/bitset.hpp"

namespace spi {

enum class ConstraintKind {
  uniform,
  partition,
  graphic,
  explicit_family,
  matching,
  knapsack,
  partition_extension,
};

const char* constraint_kind_name(ConstraintKind k);

// Day -> copies structure used when an instance is lifted onto a universe
// with at most one chosen element per day.
struct Blowup {
  int base_n = 0;
  int lifted_n = 0;
  std::vector<int> part_of;             // lifted element -> day
  std::vector<std::vector<int>> parts;  // day -> its lifted elements

  static Blowup from_parts(std::vector<std::vector<int>> parts);
  // Days touched by a lifted subset.
  Bitset project(const Bitset& lifted) const;
};

struct LinOpt {
  std::vector<double> vertex;
  double value = 0.0;
};

// Downward-closed constraint family with its polytope relaxation.  Matroid
// kinds use the rank-inequality description; matching uses the vertex-degree
// relaxation; knapsack uses the natural fractional relaxation.
class ConstraintFamily {
 public:
  ConstraintFamily() = default;

  bool valid() const { return impl_ != nullptr; }
  int n() const;
  ConstraintKind kind() const;
  bool is_matroid() const;

  bool is_independent(const Bitset& s) const;
  // Greedy rank; exact for matroid kinds.
  int rank(const Bitset& s) const;
  int rank_ground() const;

  // max w . x over the relaxation; ties in the greedy broken by lowest index.
  LinOpt linear_optimize(std::span<const double> w) const;
  // x in b * P, coordinatewise slack `tol`.
  bool in_scaled_polytope(std::span<const double> x, double b,
                          double tol = 1e-9) const;

  static ConstraintFamily uniform(int n, int k);
  static ConstraintFamily partition(int n, std::vector<std::vector<int>> parts,
                                    std::vector<int> caps);
  // Ground set = edge list of a multigraph; independent = forests.
  static ConstraintFamily graphic(int vertices,
                                  std::vector<std::pair<int, int>> edges);
  static ConstraintFamily explicit_family(int n, std::vector<Bitset> sets);
  // Ground set = edge list; independent = matchings.
  static ConstraintFamily matching(int vertices,
                                   std::vector<std::pair<int, int>> edges);
  static ConstraintFamily knapsack(std::vector<double> weights, double capacity);
  // At most one lifted element per day, projection independent in `base`.
  static ConstraintFamily partition_extension(ConstraintFamily base,
                                              Blowup blowup);

  const ConstraintFamily* extension_base() const;
  const Blowup* extension_blowup() const;

  int uniform_k() const;
  const std::vector<std::vector<int>>& parts() const;
  const std::vector<int>& caps() const;
  int vertices() const;
  const std::vector<std::pair<int, int>>& edges() const;
  const std::vector<double>& knapsack_weights() const;
  double knapsack_capacity() const;

 private:
  struct Impl;
  explicit ConstraintFamily(std::shared_ptr<const Impl> impl)
      : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// z in b * P' where P' marginalizes day masses over the day polytope.
bool membership_p_prime(std::span<const double> z, const ConstraintFamily& days,
                        const Blowup& blowup, double b, double tol = 1e-9);
// Additionally z_e <= d_e + 1e-12.
bool membership_p_double_prime(std::span<const double> z,
                               std::span<const double> d,
                               const ConstraintFamily& days,
                               const Blowup& blowup, double b,
                               double tol = 1e-9);

}  // namespace spi
