#include <cmath>

#include "core/random_instances.hpp"
#include "core/rng.hpp"
#include "core/submodular.hpp"
#include "test_util.hpp"

using namespace spi;

namespace {
Bitset bs(int n, std::uint64_t mask) { return Bitset::from_mask(n, mask); }
}  // namespace

TEST_CASE("multilinear extension of simple functions") {
  SetFunction mod = SetFunction::modular(make_ground(2), {1.0, 2.0});
  CHECK(multilinear_exact(mod, std::vector<double>{0.3, 0.5}) ==
        doctest::Approx(1.3));

  // Two elements covering the same unit item: F = 1 - (1-x0)(1-x1).
  SetFunction cov = SetFunction::coverage(make_ground(2), {{0}, {0}});
  CHECK(multilinear_exact(cov, std::vector<double>{0.5, 0.5}) ==
        doctest::Approx(0.75));
  CHECK(multilinear_exact(cov, std::vector<double>{0.2, 0.4}) ==
        doctest::Approx(1.0 - 0.8 * 0.6));

  CHECK_ERR(multilinear_exact(mod, std::vector<double>{0.3}),
            Errc::dimension_mismatch);
  CHECK_ERR(multilinear_exact(mod, std::vector<double>{0.3, 1.2}),
            Errc::invalid_argument);
}

TEST_CASE("multilinear extension through a collapse") {
  SetFunction base = SetFunction::coverage(make_ground(2), {{0, 1}, {1}});
  std::vector<int> map = {0, 0, 1, 1};
  SetFunction lift = SetFunction::collapse(base, make_ground(4), map);

  // Equivalent direct oracle without the collapse structure.
  SetFunction direct = SetFunction::custom(
      make_ground(4), true, FnKind::custom, [base, map](const Bitset& s) {
        Bitset proj(2);
        s.for_each([&](int e) { proj.set(map[e]); });
        return base(proj);
      });

  Rng rng(99);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> x(4);
    for (double& v : x) v = rng.uniform();
    CHECK(multilinear_exact(lift, x) ==
          doctest::Approx(multilinear_exact(direct, x)).epsilon(1e-12));
  }
}

TEST_CASE("monte carlo estimate agrees with the exact value") {
  SetFunction cov =
      SetFunction::coverage(make_ground(3), {{0}, {0, 1}, {1, 2}});
  std::vector<double> x = {0.4, 0.6, 0.3};
  double exact = multilinear_exact(cov, x);
  McEstimate mc = multilinear_mc(cov, x, 40000, 5);
  CHECK(mc.std_error > 0.0);
  CHECK(std::fabs(mc.estimate - exact) <= 4.0 * mc.std_error);
  // Same seed, same estimate.
  CHECK(multilinear_mc(cov, x, 40000, 5).estimate == mc.estimate);
  CHECK(multilinear_mc(cov, x, 40000, 6).estimate != mc.estimate);
}

TEST_CASE("concave closure certificates") {
  SetFunction mod = SetFunction::modular(make_ground(3), {1.0, 2.0, 0.5});
  std::vector<double> x = {0.2, 0.7, 0.4};
  ConcaveDecomposition dec = concave_closure(mod, x);
  CHECK(dec.value == doctest::Approx(1.0 * 0.2 + 2.0 * 0.7 + 0.5 * 0.4));

  double total = 0.0;
  std::vector<double> marg(3, 0.0);
  for (const auto& t : dec.terms) {
    CHECK(t.weight > 0.0);
    total += t.weight;
    t.set.for_each([&](int i) { marg[i] += t.weight; });
  }
  CHECK(total == doctest::Approx(1.0));
  for (int i = 0; i < 3; ++i) CHECK(marg[i] == doctest::Approx(x[i]));

  // Correlation closes the gap entirely on the shared-item instance.
  SetFunction cov = SetFunction::coverage(make_ground(2), {{0}, {0}});
  CHECK(concave_closure_value(cov, std::vector<double>{0.5, 0.5}) ==
        doctest::Approx(1.0));
  CHECK(gap_ratio(cov, std::vector<double>{0.5, 0.5}) ==
        doctest::Approx(0.75));

  CHECK_ERR(concave_closure(mod, std::vector<double>{0.2, 0.7}),
            Errc::dimension_mismatch);
  SetFunction wide = SetFunction::modular(make_ground(13),
                                          std::vector<double>(13, 1.0));
  CHECK_ERR(concave_closure(wide, std::vector<double>(13, 0.5)),
            Errc::ground_set_too_large);
}

TEST_CASE("gap ratio conventions") {
  SetFunction mod = SetFunction::modular(make_ground(2), {1.0, 1.0});
  CHECK(gap_ratio(mod, std::vector<double>{0.3, 0.6}) == doctest::Approx(1.0));
  SetFunction zero = SetFunction::modular(make_ground(2), {0.0, 0.0});
  CHECK(gap_ratio(zero, std::vector<double>{0.3, 0.6}) == doctest::Approx(1.0));
}

TEST_CASE("star instance closed forms") {
  // Two spokes at (1-p)/2 = 0.3 each, hub at p = 0.4.
  StarInstance star = star_instance(2, 0.4);
  REQUIRE(star.x.size() == 3);
  CHECK(star.x[2] == doctest::Approx(0.4));
  CHECK(star.f(bs(3, 0b001)) == doctest::Approx(1.0));
  CHECK(star.f(bs(3, 0b100)) == doctest::Approx(0.0));
  CHECK(star.f(bs(3, 0b101)) == doctest::Approx(0.0));
  CHECK(star.f(bs(3, 0b000)) == doctest::Approx(0.0));

  double F = multilinear_exact(star.f, star.x);
  CHECK(F == doctest::Approx(0.6 * (1.0 - 0.7 * 0.7)).epsilon(1e-12));
  double plus = concave_closure_value(star.f, star.x);
  CHECK(plus == doctest::Approx(0.6).epsilon(1e-9));

  StarStats st = star_stats(2, 0.4);
  CHECK(st.multilinear == doctest::Approx(F).epsilon(1e-12));
  CHECK(st.closure == doctest::Approx(plus).epsilon(1e-9));
  CHECK(st.ratio == doctest::Approx(F / plus).epsilon(1e-9));

  // Large-n frozen values.
  StarStats big = star_stats(1000, 0.5);
  CHECK(big.multilinear == doctest::Approx(0.1967725886).epsilon(1e-9));
  CHECK(big.ratio == doctest::Approx(0.3935451772).epsilon(1e-9));
  CHECK(star_stats(1000, 1.0).closure == doctest::Approx(0.0));
  CHECK(star_stats(1000, 1.0).ratio == doctest::Approx(1.0));  // 0/0 convention
}

TEST_CASE("rebalanced activation rates") {
  // Terms: 0.3 on {0,1}, 0.2 on {1}, slack 0.5 on the empty set.
  ConcaveDecomposition dec;
  dec.terms.push_back({0.3, bs(2, 0b11)});
  dec.terms.push_back({0.2, bs(2, 0b10)});
  dec.terms.push_back({0.5, bs(2, 0b00)});
  std::vector<double> x = {0.3, 0.5};
  std::vector<double> r = rebalance_r(dec, x);
  CHECK(r[0] == doctest::Approx(0.0));
  CHECK(r[1] == doctest::Approx(1.0 - 0.5 / (0.7 * 0.8)).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx(0.1071428571).epsilon(1e-9));
  CHECK(r[1] <= x[1]);

  ConcaveDecomposition degen;
  degen.terms.push_back({1.0, bs(2, 0b01)});
  CHECK_ERR(rebalance_r(degen, std::vector<double>{1.0, 0.0}),
            Errc::degenerate_weight);

  ConcaveDecomposition off;
  off.terms.push_back({0.3, bs(2, 0b01)});
  off.terms.push_back({0.7, bs(2, 0b00)});
  CHECK_ERR(rebalance_r(off, std::vector<double>{0.4, 0.0}),
            Errc::invalid_argument);
}

TEST_CASE("subset maximization") {
  SetFunction cov = SetFunction::coverage(make_ground(4),
                                          {{0}, {1}, {2}, {0, 2}}, {1, 2, 3});
  CHECK(f_max_value(cov, Bitset::full(4)) == doctest::Approx(6.0));
  CHECK(f_max_value(cov, bs(4, 0b1001)) == doctest::Approx(4.0));
  SetFunction cut =
      SetFunction::directed_cut(make_ground(2), {{0, 1, 2.0}});
  CHECK(f_max_value(cut, Bitset::full(2)) == doctest::Approx(2.0));

  SetFunction widest = SetFunction::modular(make_ground(30),
                                            std::vector<double>(30, 1.0));
  CHECK_ERR(f_max_value(widest, Bitset::full(30)), Errc::subset_too_large);
}

TEST_CASE("random instance generators stay submodular") {
  Rng rng(31);
  for (int t = 0; t < 5; ++t) {
    SetFunction f = random_mixture(6, rng);
    check_normalized(f);
    CHECK(check_submodular(f).ok);
    CHECK(check_nonnegative(f).ok);
    std::vector<double> x = random_point(6, rng);
    for (double v : x) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
  CHECK(random_coverage(5, rng).is_monotone());
  CHECK(check_submodular(random_cut(5, rng)).ok);
}
