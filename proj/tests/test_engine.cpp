#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/engine.hpp"
#include "core/bounds.hpp"
#include "test_util.hpp"

using namespace spi;

namespace {

SpiInstance two_day_instance() {
  // day 0 brings one of {0,1}, day 1 brings 2 or nothing
  std::vector<Day> days = {{{0, 1}, {0.3, 0.2}}, {{2}, {0.6}}};
  auto f = SetFunction::coverage(make_ground(3), {{0, 1}, {1, 2}, {0}},
                                 {1.0, 2.0, 1.5});
  return make_instance(std::move(days), ConstraintFamily::uniform(2, 1),
                       std::move(f));
}

SpiInstance prophet_instance() {
  std::vector<Day> days = {
      {{0}, {0.5}}, {{1}, {0.4}}, {{2, 3}, {0.3, 0.2}}};
  auto f = SetFunction::coverage(make_ground(4), {{0}, {1}, {2}, {0, 2}},
                                 {1.0, 2.0, 3.0});
  return make_instance(std::move(days), ConstraintFamily::uniform(3, 1),
                       std::move(f));
}

double tv_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double tv = 0.0;
  for (size_t i = 0; i < a.size(); ++i) tv += std::abs(a[i] - b[i]);
  return tv / 2.0;
}

}  // namespace

TEST_CASE("instance assembly and validation") {
  SpiInstance inst = two_day_instance();
  CHECK(inst.n_days() == 2);
  CHECK(inst.universe() == 3);
  auto d = inst.element_probs();
  CHECK(d == std::vector<double>{0.3, 0.2, 0.6});
  CHECK(inst.max_prob() == doctest::Approx(0.6));
  CHECK(inst.parent == std::vector<int>{0, 1, 2});
  ConstraintFamily lifted = inst.lifted_family();
  CHECK(lifted.n() == 3);
  CHECK(lifted.is_independent(Bitset::from_mask(3, 0b100)));
  auto y = day_marginals(inst, std::vector<double>{0.1, 0.2, 0.3});
  REQUIRE(y.size() == 2);
  CHECK(y[0] == doctest::Approx(0.3));
  CHECK(y[1] == doctest::Approx(0.3));

  auto mono = SetFunction::modular(make_ground(1), {1.0});
  CHECK_ERR(make_instance({}, ConstraintFamily::uniform(0, 1), mono),
            Errc::invalid_argument);
  CHECK_ERR(make_instance({{{0}, {0.4, 0.3}}}, ConstraintFamily::uniform(1, 1),
                          mono),
            Errc::dimension_mismatch);
  CHECK_ERR(make_instance({{{0}, {1.4}}}, ConstraintFamily::uniform(1, 1),
                          mono),
            Errc::invalid_argument);
  CHECK_ERR(make_instance({{{0, 1}, {0.6, 0.6}}},
                          ConstraintFamily::uniform(1, 1),
                          SetFunction::modular(make_ground(2), {1.0, 1.0})),
            Errc::invalid_argument);
  // day count vs family size
  CHECK_ERR(make_instance({{{0}, {0.4}}}, ConstraintFamily::uniform(2, 1),
                          mono),
            Errc::dimension_mismatch);
  // supports must tile the universe without gaps
  CHECK_ERR(make_instance({{{0}, {0.4}}, {{2}, {0.4}}},
                          ConstraintFamily::uniform(2, 1),
                          SetFunction::modular(make_ground(3), {1, 1, 1})),
            Errc::invalid_argument);
  // objective over the wrong ground size
  CHECK_ERR(make_instance({{{0}, {0.4}}}, ConstraintFamily::uniform(1, 1),
                          SetFunction::modular(make_ground(2), {1.0, 1.0})),
            Errc::dimension_mismatch);
}

TEST_CASE("small-probability reduction splits into equal copies") {
  SpiInstance inst = two_day_instance();
  SpiInstance red = reduce_small_probabilities(inst, 0.4);  // h = 3
  CHECK(red.n_days() == 2);
  CHECK(red.universe() == 9);
  CHECK(red.parent == std::vector<int>{0, 0, 0, 1, 1, 1, 2, 2, 2});
  CHECK(red.days[0].support == std::vector<int>{0, 1, 2, 3, 4, 5});
  for (int c = 0; c < 3; ++c) {
    CHECK(red.days[0].probs[c] == doctest::Approx(0.1));
    CHECK(red.days[0].probs[3 + c] == doctest::Approx(0.2 / 3));
    CHECK(red.days[1].probs[c] == doctest::Approx(0.2));
  }
  CHECK(red.max_prob() == doctest::Approx(0.2));
  // copy masses add back up
  auto dp = red.element_probs();
  double day0 = std::accumulate(dp.begin(), dp.begin() + 6, 0.0);
  CHECK(day0 == doctest::Approx(0.5));

  // any-copy-counts objective: {copy of 1, copy of 2} vs base {1,2}
  Bitset lifted(9);
  lifted.set(4);
  lifted.set(8);
  Bitset base(3);
  base.set(1);
  base.set(2);
  CHECK(red.objective(lifted) == doctest::Approx(inst.objective(base)));
  CHECK(red.objective.is_monotone() == inst.objective.is_monotone());

  CHECK_ERR(reduce_small_probabilities(inst, 0.0), Errc::invalid_argument);
  CHECK_ERR(reduce_small_probabilities(inst, 1.5), Errc::invalid_argument);
  // eps = 1 keeps one copy per element
  CHECK(reduce_small_probabilities(inst, 1.0).universe() == 3);
}

TEST_CASE("day sampler branch probabilities and exact law") {
  std::vector<Day> days = {{{0, 1}, {0.3, 0.2}}};
  SpiInstance inst =
      make_instance(std::move(days), ConstraintFamily::uniform(1, 1),
                    SetFunction::modular(make_ground(2), {1.0, 1.0}));
  DaySampler sampler(inst, {0.2, 0.1});
  CHECK(sampler.genuine_prob(0, 0) == doctest::Approx(0.2 * 0.9 / 0.3));
  CHECK(sampler.genuine_prob(0, 1) == doctest::Approx(0.1 * 0.8 / 0.2));

  auto law = sampler.exact_law(0);
  REQUIRE(law.size() == 4);
  std::vector<double> product = {0.8 * 0.9, 0.2 * 0.9, 0.8 * 0.1, 0.2 * 0.1};
  CHECK(tv_distance(law, product) <= 1e-12);
  CHECK(std::accumulate(law.begin(), law.end(), 0.0) == doctest::Approx(1.0));

  CHECK_ERR(DaySampler(inst, {0.35, 0.1}), Errc::marginal_exceeds_distribution);
  CHECK_ERR(DaySampler(inst, {-0.1, 0.1}), Errc::invalid_argument);
  CHECK_ERR(DaySampler(inst, {0.2}), Errc::dimension_mismatch);
}

TEST_CASE("day sampler draws match the product law empirically") {
  std::vector<Day> days = {{{0, 1, 2}, {0.4, 0.3, 0.2}}};
  SpiInstance inst =
      make_instance(std::move(days), ConstraintFamily::uniform(1, 1),
                    SetFunction::modular(make_ground(3), {1, 1, 1}));
  std::vector<double> z = {0.3, 0.2, 0.1};
  DaySampler sampler(inst, z);
  Rng rng(77);
  const int reps = 30000;
  std::vector<double> hits(3, 0.0);
  for (int t = 0; t < reps; ++t) {
    int arrival = sampler.sample_arrival(0, rng);
    auto draw = sampler.sample_day_set(0, arrival, rng);
    CHECK(draw.genuine == (draw.set.count() == 1));
    if (draw.genuine) {
      REQUIRE(arrival >= 0);
      CHECK(draw.set.test(inst.days[0].support[arrival]));
    }
    for (int e = 0; e < 3; ++e)
      if (draw.set.test(e)) hits[e] += 1.0;
  }
  for (int e = 0; e < 3; ++e)
    CHECK(hits[e] / reps == doctest::Approx(z[e]).epsilon(0.08));
}

TEST_CASE("rounding hits the marginal on a single day") {
  std::vector<Day> days = {{{0}, {0.5}}};
  SpiInstance inst =
      make_instance(std::move(days), ConstraintFamily::uniform(1, 1),
                    SetFunction::modular(make_ground(1), {1.0}));
  DaySampler sampler(inst, {0.4});
  const std::vector<double> y = {0.4};

  for (Algo algo : {Algo::monotone, Algo::general}) {
    GreedyOcrs scheme(inst.day_family, 0.5, y, 11);
    RoundingConfig rc;
    rc.algo = algo;
    rc.b = 0.5;
    rc.seed = 101;
    double sum = 0.0;
    const long reps = 100000;
    for (long t = 0; t < reps; ++t) {
      auto tr = round_once(inst, sampler, scheme, rc, t);
      REQUIRE(tr.steps.size() == 1);
      sum += tr.value;
    }
    const double want = algo == Algo::monotone ? 0.4 : 0.2;
    CHECK(sum / reps == doctest::Approx(want).epsilon(0.03));
  }
}

TEST_CASE("rounding keeps the selection feasible") {
  SpiInstance inst = prophet_instance();
  DaySampler sampler(inst, {0.15, 0.12, 0.1, 0.06});
  const auto y = day_marginals(inst, std::vector<double>{0.15, 0.12, 0.1, 0.06});
  ConstraintFamily lifted = inst.lifted_family();
  for (AdversaryKind adv : {AdversaryKind::fixed, AdversaryKind::random_order,
                            AdversaryKind::adaptive}) {
    GreedyOcrs scheme(inst.day_family, 0.5, y, 5);
    RoundingConfig rc;
    rc.adversary = adv;
    rc.b = 0.5;
    rc.seed = 17;
    for (long t = 0; t < 300; ++t) {
      auto tr = round_once(inst, sampler, scheme, rc, t);
      CHECK(lifted.is_independent(tr.t_alg));
      CHECK(tr.value == doctest::Approx(inst.objective(tr.t_alg)));
      REQUIRE(tr.steps.size() == 3);
      std::vector<char> seen(3, 0);
      for (const auto& rec : tr.steps) {
        REQUIRE(!seen[rec.day]);
        seen[rec.day] = 1;
        if (rec.taken) {
          CHECK(rec.fed);
          CHECK(rec.ocrs_accept);
          CHECK(rec.genuine);
          CHECK(rec.coin);
        }
      }
    }
  }
}

TEST_CASE("fixed day orders are validated and honored") {
  SpiInstance inst = prophet_instance();
  DaySampler sampler(inst, {0.1, 0.1, 0.1, 0.1});
  const auto y = day_marginals(inst, std::vector<double>{0.1, 0.1, 0.1, 0.1});
  GreedyOcrs scheme(inst.day_family, 0.5, y, 5);
  RoundingConfig rc;
  rc.b = 0.5;
  rc.order = {2, 0, 1};
  auto tr = round_once(inst, sampler, scheme, rc, 0);
  CHECK(tr.steps[0].day == 2);
  CHECK(tr.steps[1].day == 0);
  CHECK(tr.steps[2].day == 1);

  rc.order = {0, 1};
  CHECK_ERR(round_once(inst, sampler, scheme, rc, 0), Errc::invalid_argument);
  rc.order = {0, 1, 1};
  CHECK_ERR(round_once(inst, sampler, scheme, rc, 0), Errc::invalid_argument);
}

TEST_CASE("rounding is reproducible per (seed, trial)") {
  SpiInstance inst = prophet_instance();
  DaySampler sampler(inst, {0.15, 0.12, 0.1, 0.06});
  const auto y = day_marginals(inst, std::vector<double>{0.15, 0.12, 0.1, 0.06});
  RoundingConfig rc;
  rc.adversary = AdversaryKind::adaptive;
  rc.b = 0.5;
  rc.seed = 99;
  GreedyOcrs a(inst.day_family, 0.5, y, 1);
  GreedyOcrs b(inst.day_family, 0.5, y, 2);
  for (long t : {0L, 7L, 31L}) {
    auto ta = round_once(inst, sampler, a, rc, t);
    auto tb = round_once(inst, sampler, b, rc, t);
    CHECK(ta.value == tb.value);
    CHECK(ta.t_alg == tb.t_alg);
  }
}

TEST_CASE("day polytope oracle, greedy and LP paths") {
  std::vector<Day> days = {{{0}, {0.6}}, {{1}, {0.7}}};
  SpiInstance uni =
      make_instance(days, ConstraintFamily::uniform(2, 1),
                    SetFunction::modular(make_ground(2), {1.0, 1.0}));
  LinearOracle lin = day_polytope_oracle(uni);
  std::vector<double> w = {1.0, 1.0};
  auto z = lin(w);
  CHECK(z[0] == doctest::Approx(0.6));
  CHECK(z[1] == doctest::Approx(0.4));
  w = {1.0, 2.0};
  z = lin(w);
  CHECK(z[0] == doctest::Approx(0.3));
  CHECK(z[1] == doctest::Approx(0.7));

  SpiInstance kn =
      make_instance(days, ConstraintFamily::knapsack({1.0, 1.0}, 2.0),
                    SetFunction::modular(make_ground(2), {1.0, 1.0}));
  LinearOracle klin = day_polytope_oracle(kn);
  w = {1.0, 1.0};
  z = klin(w);
  CHECK(z[0] == doctest::Approx(0.6));
  CHECK(z[1] == doctest::Approx(0.7));
}

TEST_CASE("fractional solvers stay feasible and price correctly") {
  SpiInstance inst = two_day_instance();

  SolverConfig cg;
  cg.mode = SolveMode::cg;
  cg.b = 0.5;
  cg.steps = 400;
  FractionalResult r = fractional_solution(inst, cg);
  CHECK(r.value == doctest::Approx(multilinear_exact(inst.objective, r.z)));
  auto y = day_marginals(inst, r.z);
  for (double v : y) CHECK(v <= 0.5 + 1e-9);
  auto d = inst.element_probs();
  for (int e = 0; e < 3; ++e) CHECK(r.z[e] <= d[e] + 1e-9);

  // measured variant on a non-monotone objective
  std::vector<Day> days = {{{0}, {0.8}}, {{1}, {0.8}}};
  SpiInstance cut =
      make_instance(days, ConstraintFamily::uniform(2, 2),
                    SetFunction::directed_cut(
                        make_ground(2), {{0, 1, 1.0}, {1, 0, 1.0}}));
  SolverConfig mcg;
  mcg.mode = SolveMode::mcg;
  mcg.b = 0.5;
  mcg.steps = 400;
  FractionalResult m = fractional_solution(cut, mcg);
  CHECK(m.value == doctest::Approx(multilinear_exact(cut.objective, m.z)));
  CHECK(m.value > 0.0);

  cg.mode = SolveMode::cg;
  CHECK_ERR(fractional_solution(cut, cg), Errc::not_monotone);
  cg.b = 1.5;
  CHECK_ERR(fractional_solution(inst, cg), Errc::invalid_argument);
}

TEST_CASE("closure mode solves the capped distribution LP") {
  std::vector<Day> days = {{{0, 1}, {0.5, 0.4}}};
  SpiInstance inst =
      make_instance(std::move(days), ConstraintFamily::uniform(1, 1),
                    SetFunction::modular(make_ground(2), {1.0, 2.0}));
  SolverConfig cfg;
  cfg.mode = SolveMode::closure;
  cfg.b = 0.5;
  // modular objective: value = z0 + 2 z1 with z capped at b D, so both caps
  // bind and the optimum is 0.25 + 2 * 0.2
  FractionalResult r = fractional_solution(inst, cfg);
  CHECK(r.value == doctest::Approx(0.65));
  CHECK(r.z[0] == doctest::Approx(0.25));
  CHECK(r.z[1] == doctest::Approx(0.2));
}

TEST_CASE("prophet benchmark, exact and sampled") {
  SpiInstance inst = prophet_instance();
  CHECK(prophet_opt_exact(inst) == doctest::Approx(2.25));

  McEstimate mc = prophet_opt_mc(inst, 40000, 3);
  CHECK(mc.std_error > 0.0);
  CHECK(std::abs(mc.estimate - 2.25) <= 4.0 * mc.std_error + 1e-9);
  CHECK_ERR(prophet_opt_mc(inst, 0, 3), Errc::invalid_argument);

  // 7 days x 6 arrivals: 7^7 tuples blows the exact cap
  std::vector<Day> big;
  int next = 0;
  for (int i = 0; i < 7; ++i) {
    Day d;
    for (int j = 0; j < 6; ++j) {
      d.support.push_back(next++);
      d.probs.push_back(0.1);
    }
    big.push_back(std::move(d));
  }
  SpiInstance wide = make_instance(
      std::move(big), ConstraintFamily::uniform(7, 2),
      SetFunction::modular(make_ground(42), std::vector<double>(42, 1.0)));
  CHECK_ERR(prophet_opt_exact(wide), Errc::instance_too_large);
}

TEST_CASE("experiment report wiring") {
  SpiInstance inst = prophet_instance();
  ExperimentConfig cfg;
  cfg.epsilon = 0.5;
  cfg.auto_b = true;
  cfg.algo = Algo::monotone;
  cfg.adversary = AdversaryKind::fixed;
  cfg.reps = 2000;
  cfg.seed = 2026;
  cfg.solver.steps = 300;
  cfg.selectability_trials = 2000;

  ExperimentReport rep = run_experiment(inst, cfg);

  BoundSpec spec;
  spec.constraint = BoundConstraint::uniform_k;
  spec.k = 1.0;
  CHECK(rep.b == doctest::Approx(optimize_ratio(spec).b_star));
  CHECK(rep.mode == "mcg");
  CHECK(rep.algo == "monotone");
  CHECK(rep.adversary == "fixed");
  CHECK(rep.universe == 4);
  CHECK(rep.reduced_universe == 8);
  CHECK(rep.gamma_floor == doctest::Approx(std::exp(-rep.b) - 0.5));
  CHECK(rep.gamma >= rep.gamma_floor - 1e-9);
  CHECK(rep.gamma <= 1.0 + 1e-12);
  CHECK(rep.opt == doctest::Approx(2.25));
  CHECK(rep.opt_method == "exact");
  CHECK(rep.c_formula ==
        doctest::Approx(selectability_formula(spec, rep.b)));
  CHECK(rep.c_emp >= 0.0);
  CHECK(rep.c_emp <= 1.0);
  CHECK(rep.bound_value == doctest::Approx(rep.bound_factor * rep.opt));
  CHECK(rep.empirical_mean >= 0.0);
  CHECK(rep.std_error > 0.0);
  CHECK(rep.trace.empty());
  CHECK(rep.transcripts.empty());

  // same config, same numbers
  ExperimentReport again = run_experiment(inst, cfg);
  CHECK(again.empirical_mean == rep.empirical_mean);
  CHECK(again.fractional_value == rep.fractional_value);
  CHECK(again.opt == rep.opt);

  cfg.selectability_trials = 0;
  cfg.record_transcripts = 3;
  ExperimentReport lean = run_experiment(inst, cfg);
  CHECK(lean.c_emp == doctest::Approx(-1.0));
  CHECK(lean.transcripts.size() == 3);

  // monotone path refuses a non-monotone objective
  std::vector<Day> days = {{{0}, {0.5}}, {{1}, {0.5}}};
  SpiInstance cut =
      make_instance(std::move(days), ConstraintFamily::uniform(2, 2),
                    SetFunction::directed_cut(make_ground(2), {{0, 1, 1.0}}));
  CHECK_ERR(run_experiment(cut, cfg), Errc::not_monotone);
  cfg.reps = 0;
  CHECK_ERR(run_experiment(inst, cfg), Errc::invalid_argument);
}
