#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "core/bitset.hpp"

namespace spi {

struct GroundSet {
  int n = 0;
  std::vector<std::string> labels;  // empty, or one label per element

  std::string label(int i) const {
    return labels.empty() ? std::to_string(i) : labels[i];
  }
};

inline GroundSet make_ground(int n) { return GroundSet{n, {}}; }

enum class FnKind {
  modular,
  coverage,
  cut,
  table,
  budget_additive,
  matroid_rank,
  custom,
  derived,
};

const char* fn_kind_name(FnKind k);

struct Arc {
  int from = 0;
  int to = 0;
  double weight = 1.0;
};

class ConstraintFamily;

class SetFunction;

namespace detail {
struct Oracle;
SetFunction wrap_oracle(std::shared_ptr<const Oracle> impl);
}  // namespace detail

// Non-negative normalized set function given by an evaluation oracle.
// Value semantics; the underlying oracle is immutable and shareable, so
// copies are cheap and evaluation is safe from multiple threads.
class SetFunction {
 public:
  SetFunction() = default;

  double value(const Bitset& s) const;
  double operator()(const Bitset& s) const { return value(s); }
  double value_mask(std::uint64_t mask) const;  // n <= 64

  int n() const;
  const GroundSet& ground() const;
  bool is_monotone() const;
  FnKind kind() const;
  bool valid() const { return impl_ != nullptr; }

  static SetFunction modular(GroundSet g, std::vector<double> weights);
  // covers[i] lists the items covered by element i; the value of a set is
  // the total weight of the items its elements cover jointly.
  static SetFunction coverage(GroundSet g, std::vector<std::vector<int>> covers,
                              std::vector<double> item_weights = {});
  static SetFunction directed_cut(GroundSet g, std::vector<Arc> arcs);
  // Dense table of 2^n values indexed by subset mask; values[0] must be 0.
  static SetFunction table(GroundSet g, std::vector<double> values);
  static SetFunction budget_additive(GroundSet g, std::vector<double> weights,
                                     double budget);
  static SetFunction weighted_matroid_rank(GroundSet g,
                                           const ConstraintFamily& matroid,
                                           std::vector<double> weights);
  static SetFunction sum(const SetFunction& a, const SetFunction& b,
                         double wa = 1.0, double wb = 1.0);
  static SetFunction custom(GroundSet g, bool monotone, FnKind tag,
                            std::function<double(const Bitset&)> fn);
  // Lifted copy of `base`: a base element counts as present when any of its
  // copies does.  to_base maps lifted elements onto base elements.
  static SetFunction collapse(SetFunction base, GroundSet lifted,
                              std::vector<int> to_base);

  // Set for collapse-structured functions, null otherwise.
  const SetFunction* collapse_base() const;
  const std::vector<int>* collapse_map() const;

 private:
  friend SetFunction detail::wrap_oracle(std::shared_ptr<const detail::Oracle>);
  explicit SetFunction(std::shared_ptr<const detail::Oracle> impl)
      : impl_(std::move(impl)) {}
  std::shared_ptr<const detail::Oracle> impl_;
};

struct ValidationReport {
  bool ok = true;
  std::string message;
};

// f(empty) == 0 within 1e-12; throws Errc::invalid_argument otherwise.
void check_normalized(const SetFunction& f);
// Pairwise marginal characterization, exhaustive for n <= 10 and sampled
// beyond; slack 1e-9.
ValidationReport check_submodular(const SetFunction& f, int sample_cases = 2000,
                                  std::uint64_t seed = 1);
ValidationReport check_monotone(const SetFunction& f, int sample_cases = 2000,
                                std::uint64_t seed = 2);
ValidationReport check_nonnegative(const SetFunction& f, int sample_cases = 2000,
                                   std::uint64_t seed = 3);

}  // namespace spi
