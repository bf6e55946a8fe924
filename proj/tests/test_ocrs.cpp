#include <cmath>

#include "core/ocrs.hpp"
#include "test_util.hpp"

using namespace spi;

namespace {
Bitset bs(int n, std::uint64_t mask) { return Bitset::from_mask(n, mask); }
}  // namespace

TEST_CASE("greedy scheme accepts within the family only") {
  GreedyOcrs s(ConstraintFamily::uniform(3, 1), 0.5, {0.2, 0.2, 0.1}, 1);
  CHECK(s.n() == 3);
  CHECK(s.b() == doctest::Approx(0.5));
  CHECK(!s.offer(0, false));  // inactive
  CHECK(s.offer(1, true));
  CHECK(!s.offer(2, true));  // cardinality reached
  CHECK(s.accepted() == bs(3, 0b010));
  CHECK(s.offered() == bs(3, 0b111));
  CHECK_ERR(s.offer(0, true), Errc::duplicate_offer);
  s.reset();
  CHECK(s.accepted().empty());
  CHECK(s.offer(2, true));
  CHECK_ERR(s.offer(5, true), Errc::invalid_argument);
}

TEST_CASE("scheme construction validates the scaled polytope") {
  CHECK_ERR(GreedyOcrs(ConstraintFamily::uniform(2, 1), 0.3, {0.2, 0.2}, 1),
            Errc::not_in_polytope);
  CHECK_ERR(GreedyOcrs(ConstraintFamily::uniform(2, 1), 1.5, {0.2, 0.2}, 1),
            Errc::invalid_argument);
}

TEST_CASE("addable core") {
  GreedyOcrs s(ConstraintFamily::uniform(4, 2), 0.5, {0.2, 0.1, 0.1, 0.1}, 1);
  CHECK(s.addable_core(bs(4, 0b0011)) == bs(4, 0b0011));
  CHECK(s.addable_core(bs(4, 0b0111)).empty());
  CHECK(s.addable_core(bs(4, 0b0000)).empty());

  GreedyOcrs p(ConstraintFamily::partition(4, {{0, 1}, {2, 3}}, {1, 1}), 0.5,
               {0.2, 0.2, 0.2, 0.2}, 1);
  // Both elements of part 0 are present, so only the lone part-1 element
  // survives every order.
  CHECK(p.addable_core(bs(4, 0b0111)) == bs(4, 0b0100));
}

TEST_CASE("day selections lift to the universe") {
  Blowup bl = Blowup::from_parts({{0, 1}, {2}});
  GreedyOcrs days(ConstraintFamily::uniform(2, 1), 0.5, {0.3, 0.2}, 1);
  CHECK(lift_day_selection(days, bl, bs(3, 0b001)) == bs(3, 0b001));
  CHECK(lift_day_selection(days, bl, bs(3, 0b100)) == bs(3, 0b100));
  // Two active days at rank one: neither survives every order.
  CHECK(lift_day_selection(days, bl, bs(3, 0b101)).empty());
  // Two copies of one day never lift.
  CHECK(lift_day_selection(days, bl, bs(3, 0b011)).empty());
  CHECK_ERR(lift_day_selection(days, bl, bs(2, 0b01)),
            Errc::dimension_mismatch);
}

TEST_CASE("selectability estimates match the closed form") {
  // Uniform rank one: the element survives iff no other element is active,
  // so the probability is (1-x)^2 = 0.64.
  ConstraintFamily fam = ConstraintFamily::uniform(3, 1);
  std::vector<double> x = {0.2, 0.2, 0.2};
  auto est = estimate_selectability(fam, 0.6, x, 100000, 7);
  REQUIRE(est.size() == 3);
  for (const auto& e : est) {
    CHECK(e.std_error > 0.0);
    CHECK(e.std_error ==
          doctest::Approx(std::sqrt(e.estimate * (1 - e.estimate) / 100000))
              .epsilon(1e-6));
    CHECK(std::fabs(e.estimate - 0.64) <= 4.0 * e.std_error);
  }
  // Deterministic under a fixed seed.
  CHECK(estimate_selectability(fam, 0.6, x, 1000, 7)[0].estimate ==
        estimate_selectability(fam, 0.6, x, 1000, 7)[0].estimate);
  CHECK_ERR(estimate_selectability(fam, 0.5, x, 1000, 7),
            Errc::not_in_polytope);
  CHECK_ERR(estimate_selectability(fam, 0.6, x, 0, 7), Errc::invalid_argument);
}

TEST_CASE("day gamma") {
  Blowup bl = Blowup::from_parts({{0, 1}, {2}});
  std::vector<double> z = {0.2, 0.3, 0.1};
  CHECK(day_gamma(z, bl) == doctest::Approx(0.56).epsilon(1e-12));
  z = {0.2, 0.3, 0.5};
  CHECK(day_gamma(z, bl) == doctest::Approx(0.5).epsilon(1e-12));
  z = {0.2, 1.0, 0.1};
  CHECK_ERR(day_gamma(z, bl), Errc::saturated_coordinate);
}
