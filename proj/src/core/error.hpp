#pragma once

#include <stdexcept>
#include <string>

namespace spi {

enum class Errc {
  invalid_argument,
  dimension_mismatch,
  parse,
  ground_set_too_large,
  subset_too_large,
  instance_too_large,
  degenerate_weight,
  not_monotone,
  not_in_polytope,
  marginal_exceeds_distribution,
  duplicate_offer,
  saturated_coordinate,
  infeasible,
  internal,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

// Argument guard used at public entry points.
inline void require(bool ok, Errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace spi
