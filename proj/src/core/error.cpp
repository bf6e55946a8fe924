#include "core/error.hpp"

namespace spi {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::parse: return "parse";
    case Errc::ground_set_too_large: return "ground_set_too_large";
    case Errc::subset_too_large: return "subset_too_large";
    case Errc::instance_too_large: return "instance_too_large";
    case Errc::degenerate_weight: return "degenerate_weight";
    case Errc::not_monotone: return "not_monotone";
    case Errc::not_in_polytope: return "not_in_polytope";
    case Errc::marginal_exceeds_distribution:
      return "marginal_exceeds_distribution";
    case Errc::duplicate_offer: return "duplicate_offer";
    case Errc::saturated_coordinate: return "saturated_coordinate";
    case Errc::infeasible: return "infeasible";
    case Errc::internal: return "internal";
  }
  return "unknown";
}

}  // namespace spi
