#include <cmath>
#include <cstring>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "spi/spi.h"

namespace {

std::string take(char* s) {
  REQUIRE(s != nullptr);
  std::string out = s;
  spi_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("status names and last error") {
  CHECK(std::strcmp(spi_status_name(SPI_OK), "ok") == 0);
  CHECK(std::strcmp(spi_status_name(SPI_ERR_PARSE), "parse") == 0);
  CHECK(std::strcmp(spi_status_name(SPI_ERR_NOT_MONOTONE), "not_monotone") == 0);
  CHECK(std::strcmp(spi_status_name(SPI_ERR_UNKNOWN), "unknown") == 0);

  spi_function* f = nullptr;
  CHECK(spi_function_from_json("{broken", &f) == SPI_ERR_PARSE);
  CHECK(f == nullptr);
  CHECK(std::strlen(spi_last_error()) > 0);

  double v = 0.0;
  CHECK(spi_cg_bound(0.5, &v) == SPI_OK);
  CHECK(std::strlen(spi_last_error()) == 0);  // success clears the message
}

TEST_CASE("function handle round trip") {
  spi_function* f = nullptr;
  REQUIRE(spi_function_from_json(
              R"({"kind":"coverage","n":2,"covers":[[0],[0,1]],"item_weights":[2,1]})",
              &f) == SPI_OK);
  int n = 0, mono = 0;
  CHECK(spi_function_ground_size(f, &n) == SPI_OK);
  CHECK(n == 2);
  CHECK(spi_function_is_monotone(f, &mono) == SPI_OK);
  CHECK(mono == 1);

  double v = 0.0;
  int both[2] = {0, 1};
  CHECK(spi_function_value(f, both, 2, &v) == SPI_OK);
  CHECK(v == doctest::Approx(3.0));
  CHECK(spi_function_value(f, nullptr, 0, &v) == SPI_OK);
  CHECK(v == doctest::Approx(0.0));
  int bad[1] = {7};
  CHECK(spi_function_value(f, bad, 1, &v) == SPI_ERR_INVALID_ARGUMENT);

  // f({0}) = 2, f({1}) = 3, f({0,1}) = 3
  double x[2] = {0.5, 0.5};
  CHECK(spi_multilinear_exact(f, x, 2, &v) == SPI_OK);
  CHECK(v == doctest::Approx(0.25 * (0 + 2 + 3 + 3)));
  double est = 0.0, err = 0.0;
  CHECK(spi_multilinear_mc(f, x, 2, 20000, 7, &est, &err) == SPI_OK);
  CHECK(err > 0.0);
  CHECK(std::abs(est - v) <= 5.0 * err + 1e-9);
  double cl = 0.0, gap = 0.0;
  CHECK(spi_concave_closure_value(f, x, 2, &cl) == SPI_OK);
  CHECK(spi_gap_ratio(f, x, 2, &gap) == SPI_OK);
  CHECK(gap == doctest::Approx(v / cl));

  CHECK(spi_multilinear_exact(nullptr, x, 2, &v) == SPI_ERR_INVALID_ARGUMENT);
  CHECK(spi_multilinear_exact(f, x, 2, nullptr) == SPI_ERR_INVALID_ARGUMENT);
  double xbad[2] = {1.5, 0.0};
  CHECK(spi_multilinear_exact(f, xbad, 2, &v) == SPI_ERR_INVALID_ARGUMENT);
  double xshort[1] = {0.5};
  CHECK(spi_multilinear_exact(f, xshort, 1, &v) == SPI_ERR_DIMENSION_MISMATCH);
  spi_function_free(f);
}

TEST_CASE("constraint handle round trip") {
  spi_constraint* c = nullptr;
  REQUIRE(spi_constraint_from_json(R"({"kind":"uniform","n":3,"k":1})", &c) ==
          SPI_OK);
  int n = 0;
  CHECK(spi_constraint_size(c, &n) == SPI_OK);
  CHECK(n == 3);
  int ind = -1;
  int one[1] = {2};
  CHECK(spi_constraint_is_independent(c, one, 1, &ind) == SPI_OK);
  CHECK(ind == 1);
  int two[2] = {0, 2};
  CHECK(spi_constraint_is_independent(c, two, 2, &ind) == SPI_OK);
  CHECK(ind == 0);
  int rank = -1;
  CHECK(spi_constraint_rank(c, two, 2, &rank) == SPI_OK);
  CHECK(rank == 1);

  // closed form for uniform(3,1) at x = 0.2: 1 - (1 - 0.8^2) / (3 * 0.2)
  double x[3] = {0.2, 0.2, 0.2};
  double mn = 0.0, se = 0.0;
  CHECK(spi_selectability_estimate(c, 0.7, x, 3, 40000, 5, &mn, &se) == SPI_OK);
  CHECK(se > 0.0);
  CHECK(std::abs(mn - 0.64) <= 5.0 * se + 1e-9);
  double xhot[3] = {0.5, 0.5, 0.5};
  CHECK(spi_selectability_estimate(c, 0.7, xhot, 3, 100, 5, &mn, &se) ==
        SPI_ERR_NOT_IN_POLYTOPE);
  spi_constraint_free(c);
}

TEST_CASE("instance handle and prophet benchmark") {
  const char* json = R"({
    "days":[{"probs":[0.5]},{"probs":[0.4]},{"probs":[0.3,0.2]}],
    "constraint":{"kind":"uniform","k":1},
    "objective":{"kind":"coverage","covers":[[0],[1],[2],[0,2]],
                 "item_weights":[1,2,3]}
  })";
  spi_instance* inst = nullptr;
  REQUIRE(spi_instance_from_json(json, &inst) == SPI_OK);
  int v = 0;
  CHECK(spi_instance_universe(inst, &v) == SPI_OK);
  CHECK(v == 4);
  CHECK(spi_instance_days(inst, &v) == SPI_OK);
  CHECK(v == 3);
  double opt = 0.0;
  CHECK(spi_prophet_opt(inst, &opt) == SPI_OK);
  CHECK(opt == doctest::Approx(2.25));
  double est = 0.0, err = 0.0;
  CHECK(spi_prophet_opt_mc(inst, 40000, 3, &est, &err) == SPI_OK);
  CHECK(std::abs(est - 2.25) <= 5.0 * err + 1e-9);
  CHECK(spi_prophet_opt_mc(inst, 0, 3, &est, &err) == SPI_ERR_INVALID_ARGUMENT);
  spi_instance_free(inst);

  spi_instance* none = nullptr;
  CHECK(spi_instance_from_json(R"({"days":[]})", &none) == SPI_ERR_PARSE);
}

TEST_CASE("bound calculators") {
  double v = 0.0;
  CHECK(spi_cg_bound(1.0, &v) == SPI_OK);
  CHECK(v == doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK(spi_mcg_plain_bound(0.5, &v) == SPI_OK);
  CHECK(v == doctest::Approx(0.5 * std::exp(-0.5)));
  CHECK(spi_mcg_bound(0.0, 0.7, &v) == SPI_OK);
  CHECK(v == doctest::Approx(1.0 - std::exp(-0.7)));
  CHECK(spi_mcg_bound(1.0, 0.7, &v) == SPI_ERR_INVALID_ARGUMENT);
  CHECK(spi_cg_bound(1.5, &v) == SPI_ERR_INVALID_ARGUMENT);

  double ml = 0.0, cl = 0.0, ratio = 0.0;
  CHECK(spi_star_stats(1000, 0.5, &ml, &cl, &ratio) == SPI_OK);
  CHECK(cl == doctest::Approx(0.5));
  CHECK(ratio == doctest::Approx(0.3935451772).epsilon(1e-9));
  CHECK(ml == doctest::Approx(cl * ratio));
  CHECK(spi_star_stats(0, 0.5, &ml, &cl, &ratio) == SPI_ERR_INVALID_ARGUMENT);

  CHECK(spi_selectability_formula("matroid", 0.0, 0.3, &v) == SPI_OK);
  CHECK(v == doctest::Approx(0.7));
  CHECK(spi_selectability_formula("uniform", 4.0, 0.5, &v) == SPI_OK);
  CHECK(v == doctest::Approx(1.0 - std::exp(-0.25)));
  CHECK(spi_selectability_formula("nonsense", 0.0, 0.3, &v) ==
        SPI_ERR_INVALID_ARGUMENT);

  double b_star = 0.0, ratio2 = 0.0;
  CHECK(spi_optimize_ratio("uniform-inf", 1, 0.0, &b_star, &ratio2) == SPI_OK);
  CHECK(b_star == doctest::Approx(1.0));
  CHECK(1.0 / ratio2 == doctest::Approx(4.30026).epsilon(1e-5));
  CHECK(spi_optimize_ratio("matching", 1, 0.0, &b_star, &ratio2) == SPI_OK);
  CHECK(b_star == doctest::Approx(std::log(4.0 / 3.0)).epsilon(1e-4));
  CHECK(spi_optimize_ratio("matroid", 0, 0.0, &b_star, &ratio2) == SPI_OK);
  CHECK(1.0 / ratio2 == doctest::Approx(29.539).epsilon(1e-4));
}

TEST_CASE("table export") {
  char* csv = nullptr;
  REQUIRE(spi_table(0.0, "csv", &csv) == SPI_OK);
  std::string text = take(csv);
  CHECK(text.rfind("constraint,objective,b_star,ratio,reciprocal,note\n", 0) ==
        0);
  CHECK(text.find("knapsack,general") != std::string::npos);

  char* js = nullptr;
  REQUIRE(spi_table(2.0, "json", &js) == SPI_OK);
  auto parsed = nlohmann::json::parse(take(js));
  CHECK(parsed.is_array());
  CHECK(parsed.size() == 11);

  char* out = nullptr;
  CHECK(spi_table(0.0, "yaml", &out) == SPI_ERR_INVALID_ARGUMENT);
  CHECK(spi_table(0.0, nullptr, &out) == SPI_ERR_INVALID_ARGUMENT);
}

TEST_CASE("simulate, gap check, lemma verification") {
  const char* cfg = R"({
    "instance":{
      "days":[{"probs":[0.5]},{"probs":[0.4]},{"probs":[0.3,0.2]}],
      "constraint":{"kind":"uniform","k":1},
      "objective":{"kind":"coverage","covers":[[0],[1],[2],[0,2]],
                   "item_weights":[1,2,3]}
    },
    "epsilon":0.5,"reps":500,"seed":11,"steps":200
  })";
  char* rep = nullptr;
  REQUIRE(spi_simulate(cfg, &rep) == SPI_OK);
  auto j = nlohmann::json::parse(take(rep));
  CHECK(j["universe"] == 4);
  CHECK(j["reduced_universe"] == 8);
  CHECK(j["opt_method"] == "exact");
  CHECK(j["opt"].get<double>() == doctest::Approx(2.25));
  CHECK(j["reps"] == 500);
  CHECK(!j.contains("c_emp"));

  char* bad = nullptr;
  CHECK(spi_simulate("{\"instance\":{}}", &bad) == SPI_ERR_PARSE);

  char* gap = nullptr;
  REQUIRE(spi_gap_check(R"({"cases":30,"n_max":6,"seed":3})", &gap) == SPI_OK);
  auto g = nlohmann::json::parse(take(gap));
  CHECK(g["cases"] == 30);
  CHECK(g["violations"] == 0);
  CHECK(g["pass"] == true);
  CHECK(g["min_ratio"].get<double>() > 0.0);

  char* lem = nullptr;
  REQUIRE(spi_verify_lemmas(5, 50, &lem) == SPI_OK);
  auto l = nlohmann::json::parse(take(lem));
  CHECK(l["all_pass"] == true);
  REQUIRE(l["lemmas"].is_array());
  CHECK(l["lemmas"].size() == 5);
  CHECK(l["lemmas"][0]["violations"] == 0);
  CHECK(spi_verify_lemmas(5, 0, &lem) == SPI_ERR_INVALID_ARGUMENT);
}
