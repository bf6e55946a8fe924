#include "spi/spi.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "core/bounds.hpp"
#include "core/continuous_greedy.hpp"
#include "core/engine.hpp"
#include "core/error.hpp"
#include "core/json_io.hpp"
#include "core/lemmas.hpp"
#include "core/ocrs.hpp"
#include "core/submodular.hpp"

struct spi_function {
  spi::SetFunction fn;
};
struct spi_constraint {
  spi::ConstraintFamily family;
};
struct spi_instance {
  spi::SpiInstance inst;
};

namespace {

thread_local std::string g_last_error;

spi_status to_status(spi::Errc c) {
  return static_cast<spi_status>(static_cast<int>(c) + 1);
}

template <typename F>
spi_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return SPI_OK;
  } catch (const spi::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SPI_ERR_UNKNOWN;
  }
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p != nullptr) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void* p, const char* what) {
  spi::require(p != nullptr, spi::Errc::invalid_argument,
               std::string(what) + " must not be null");
}

spi::Bitset to_set(const int* elements, int count, int n) {
  spi::require(count >= 0, spi::Errc::invalid_argument,
               "element count must be non-negative");
  if (count > 0) need(elements, "elements");
  spi::Bitset s(n);
  for (int i = 0; i < count; ++i) {
    spi::require(elements[i] >= 0 && elements[i] < n, spi::Errc::invalid_argument,
                 "element index out of range");
    s.set(elements[i]);
  }
  return s;
}

std::span<const double> to_span(const double* x, int n) {
  spi::require(n >= 0, spi::Errc::invalid_argument, "size must be non-negative");
  if (n > 0) need(x, "x");
  return {x, static_cast<size_t>(n)};
}

spi::BoundSpec named_spec(const char* constraint, int monotone, double k) {
  need(constraint, "constraint");
  spi::BoundSpec spec;
  spec.monotone = monotone != 0;
  const std::string name = constraint;
  if (name == "uniform") {
    spec.constraint = spi::BoundConstraint::uniform_k;
    spec.k = k;
  } else if (name == "uniform-inf" || name == "uniform_inf") {
    spec.constraint = spi::BoundConstraint::uniform_inf;
  } else if (name == "matroid") {
    spec.constraint = spi::BoundConstraint::matroid;
  } else if (name == "matching") {
    spec.constraint = spi::BoundConstraint::matching;
  } else if (name == "knapsack") {
    spec.constraint = spi::BoundConstraint::knapsack;
  } else {
    spi::fail(spi::Errc::invalid_argument,
              "unknown constraint name \"" + name + "\"");
  }
  return spec;
}

}  // namespace

extern "C" {

const char* spi_status_name(spi_status s) {
  if (s == SPI_OK) return "ok";
  if (s == SPI_ERR_UNKNOWN) return "unknown";
  return spi::errc_name(static_cast<spi::Errc>(static_cast<int>(s) - 1));
}

const char* spi_last_error(void) { return g_last_error.c_str(); }

void spi_string_free(char* s) { std::free(s); }

/* ----- set functions ----- */

spi_status spi_function_from_json(const char* json, spi_function** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    auto fn = spi::function_from_json(spi::parse_json(json));
    *out = new spi_function{std::move(fn)};
  });
}

void spi_function_free(spi_function* f) { delete f; }

spi_status spi_function_ground_size(const spi_function* f, int* out) {
  return guarded([&] {
    need(f, "function");
    need(out, "out");
    *out = f->fn.n();
  });
}

spi_status spi_function_is_monotone(const spi_function* f, int* out) {
  return guarded([&] {
    need(f, "function");
    need(out, "out");
    *out = f->fn.is_monotone() ? 1 : 0;
  });
}

spi_status spi_function_value(const spi_function* f, const int* elements,
                              int count, double* out) {
  return guarded([&] {
    need(f, "function");
    need(out, "out");
    *out = f->fn(to_set(elements, count, f->fn.n()));
  });
}

spi_status spi_multilinear_exact(const spi_function* f, const double* x, int n,
                                 double* out) {
  return guarded([&] {
    need(f, "function");
    need(out, "out");
    *out = spi::multilinear_exact(f->fn, to_span(x, n));
  });
}

spi_status spi_multilinear_mc(const spi_function* f, const double* x, int n,
                              long trials, uint64_t seed, double* estimate,
                              double* std_error) {
  return guarded([&] {
    need(f, "function");
    need(estimate, "estimate");
    auto est = spi::multilinear_mc(f->fn, to_span(x, n), trials, seed);
    *estimate = est.estimate;
    if (std_error != nullptr) *std_error = est.std_error;
  });
}

spi_status spi_concave_closure_value(const spi_function* f, const double* x,
                                     int n, double* out) {
  return guarded([&] {
    need(f, "function");
    need(out, "out");
    *out = spi::concave_closure_value(f->fn, to_span(x, n));
  });
}

spi_status spi_gap_ratio(const spi_function* f, const double* x, int n,
                         double* out) {
  return guarded([&] {
    need(f, "function");
    need(out, "out");
    *out = spi::gap_ratio(f->fn, to_span(x, n));
  });
}

/* ----- constraints ----- */

spi_status spi_constraint_from_json(const char* json, spi_constraint** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    auto fam = spi::constraint_from_json(spi::parse_json(json));
    *out = new spi_constraint{std::move(fam)};
  });
}

void spi_constraint_free(spi_constraint* c) { delete c; }

spi_status spi_constraint_size(const spi_constraint* c, int* out) {
  return guarded([&] {
    need(c, "constraint");
    need(out, "out");
    *out = c->family.n();
  });
}

spi_status spi_constraint_is_independent(const spi_constraint* c,
                                         const int* elements, int count,
                                         int* out) {
  return guarded([&] {
    need(c, "constraint");
    need(out, "out");
    *out = c->family.is_independent(to_set(elements, count, c->family.n()))
               ? 1
               : 0;
  });
}

spi_status spi_constraint_rank(const spi_constraint* c, const int* elements,
                               int count, int* out) {
  return guarded([&] {
    need(c, "constraint");
    need(out, "out");
    *out = c->family.rank(to_set(elements, count, c->family.n()));
  });
}

spi_status spi_selectability_estimate(const spi_constraint* c, double b,
                                      const double* x, int n, long trials,
                                      uint64_t seed, double* min_estimate,
                                      double* min_std_error) {
  return guarded([&] {
    need(c, "constraint");
    need(min_estimate, "min_estimate");
    auto per = spi::estimate_selectability(c->family, b, to_span(x, n), trials,
                                           seed);
    double best = 1.0, err = 0.0;
    for (const auto& e : per) {
      if (e.estimate <= best) {
        best = e.estimate;
        err = e.std_error;
      }
    }
    *min_estimate = best;
    if (min_std_error != nullptr) *min_std_error = err;
  });
}

/* ----- instances ----- */

spi_status spi_instance_from_json(const char* json, spi_instance** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    auto inst = spi::instance_from_json(spi::parse_json(json));
    *out = new spi_instance{std::move(inst)};
  });
}

void spi_instance_free(spi_instance* inst) { delete inst; }

spi_status spi_instance_universe(const spi_instance* inst, int* out) {
  return guarded([&] {
    need(inst, "instance");
    need(out, "out");
    *out = inst->inst.universe();
  });
}

spi_status spi_instance_days(const spi_instance* inst, int* out) {
  return guarded([&] {
    need(inst, "instance");
    need(out, "out");
    *out = inst->inst.n_days();
  });
}

spi_status spi_prophet_opt(const spi_instance* inst, double* out) {
  return guarded([&] {
    need(inst, "instance");
    need(out, "out");
    *out = spi::prophet_opt_exact(inst->inst);
  });
}

spi_status spi_prophet_opt_mc(const spi_instance* inst, long trials,
                              uint64_t seed, double* estimate,
                              double* std_error) {
  return guarded([&] {
    need(inst, "instance");
    need(estimate, "estimate");
    auto est = spi::prophet_opt_mc(inst->inst, trials, seed);
    *estimate = est.estimate;
    if (std_error != nullptr) *std_error = est.std_error;
  });
}

/* ----- closed-form bounds ----- */

spi_status spi_cg_bound(double b, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = spi::cg_bound(b);
  });
}

spi_status spi_mcg_plain_bound(double b, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = spi::mcg_plain_bound(b);
  });
}

spi_status spi_mcg_bound(double p, double b, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = spi::mcg_bound(p, b);
  });
}

spi_status spi_star_stats(int n, double p, double* multilinear, double* closure,
                          double* ratio) {
  return guarded([&] {
    auto st = spi::star_stats(n, p);
    if (multilinear != nullptr) *multilinear = st.multilinear;
    if (closure != nullptr) *closure = st.closure;
    if (ratio != nullptr) *ratio = st.ratio;
  });
}

spi_status spi_selectability_formula(const char* constraint, double k, double b,
                                     double* out) {
  return guarded([&] {
    need(out, "out");
    *out = spi::selectability_formula(named_spec(constraint, 1, k), b);
  });
}

spi_status spi_optimize_ratio(const char* constraint, int monotone, double k,
                              double* b_star, double* ratio) {
  return guarded([&] {
    auto r = spi::optimize_ratio(named_spec(constraint, monotone, k));
    if (b_star != nullptr) *b_star = r.b_star;
    if (ratio != nullptr) *ratio = r.ratio;
  });
}

spi_status spi_table(double finite_k, const char* format, char** out) {
  return guarded([&] {
    need(format, "format");
    need(out, "out");
    const std::string fmt = format;
    std::string text;
    if (fmt == "csv")
      text = spi::table_csv(finite_k);
    else if (fmt == "json")
      text = spi::table_json(finite_k);
    else
      spi::fail(spi::Errc::invalid_argument,
                "format must be \"csv\" or \"json\"");
    *out = dup_string(text);
    spi::require(*out != nullptr, spi::Errc::internal, "allocation failed");
  });
}

/* ----- experiments and checks ----- */

spi_status spi_simulate(const char* config_json, char** report_json) {
  return guarded([&] {
    need(config_json, "config_json");
    need(report_json, "report_json");
    auto parsed = spi::experiment_from_json(spi::parse_json(config_json));
    auto report = spi::run_experiment(parsed.instance, parsed.config);
    *report_json = dup_string(spi::report_to_json(report).dump(2));
    spi::require(*report_json != nullptr, spi::Errc::internal,
                 "allocation failed");
  });
}

spi_status spi_gap_check(const char* config_json, char** report_json) {
  return guarded([&] {
    need(config_json, "config_json");
    need(report_json, "report_json");
    const spi::Json cfg = spi::parse_json(config_json);
    const int cases = cfg.value("cases", 200);
    const int n_max = cfg.value("n_max", 10);
    const std::uint64_t seed = cfg.value("seed", std::uint64_t{0});
    auto rep = spi::verify_correlation_gap(cases, n_max, seed);
    spi::Json j;
    j["cases"] = rep.cases;
    j["violations"] = rep.violations;
    j["min_slack"] = rep.min_slack;
    j["min_ratio"] = rep.min_ratio;
    j["pass"] = rep.pass();
    *report_json = dup_string(j.dump(2));
    spi::require(*report_json != nullptr, spi::Errc::internal,
                 "allocation failed");
  });
}

spi_status spi_verify_lemmas(uint64_t seed, long cases_each,
                             char** report_json) {
  return guarded([&] {
    need(report_json, "report_json");
    spi::require(cases_each > 0 && cases_each <= 1000000,
                 spi::Errc::invalid_argument,
                 "cases_each must lie in [1, 1e6]");
    auto reports =
        spi::verify_sampling_lemmas(seed, static_cast<int>(cases_each));
    spi::Json arr = spi::Json::array();
    for (const auto& r : reports) {
      spi::Json j;
      j["name"] = r.name;
      j["cases"] = r.cases;
      j["violations"] = r.violations;
      j["min_slack"] = r.min_slack;
      j["pass"] = r.pass();
      arr.push_back(std::move(j));
    }
    spi::Json j;
    j["lemmas"] = std::move(arr);
    j["all_pass"] = spi::all_pass(reports);
    *report_json = dup_string(j.dump(2));
    spi::require(*report_json != nullptr, spi::Errc::internal,
                 "allocation failed");
  });
}

}  // extern "C"
