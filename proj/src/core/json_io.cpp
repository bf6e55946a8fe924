#include "json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace spi {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(Errc::parse, what); }

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("field \"") + key + "\": " + e.what());
  }
}

template <typename T>
T field_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return field<T>(j, key);
}

std::vector<std::pair<int, int>> edge_list(const Json& j, const char* key) {
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : field<Json>(j, key)) {
    if (!e.is_array() || e.size() != 2) bad("edges must be [u,v] pairs");
    edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  }
  return edges;
}

}  // namespace

SetFunction function_from_json(const Json& j) {
  if (!j.is_object()) bad("objective must be an object");
  const std::string kind = field<std::string>(j, "kind");
  const int n = field<int>(j, "n");
  if (kind == "modular")
    return SetFunction::modular(make_ground(n),
                                field<std::vector<double>>(j, "weights"));
  if (kind == "coverage") {
    auto covers = field<std::vector<std::vector<int>>>(j, "covers");
    auto weights = field_or<std::vector<double>>(j, "item_weights", {});
    return SetFunction::coverage(make_ground(n), std::move(covers),
                                 std::move(weights));
  }
  if (kind == "cut") {
    std::vector<Arc> arcs;
    for (const auto& a : field<Json>(j, "arcs")) {
      if (a.is_array() && (a.size() == 2 || a.size() == 3)) {
        Arc arc;
        arc.from = a.at(0).get<int>();
        arc.to = a.at(1).get<int>();
        arc.weight = a.size() == 3 ? a.at(2).get<double>() : 1.0;
        arcs.push_back(arc);
      } else {
        bad("arcs must be [from,to] or [from,to,weight]");
      }
    }
    return SetFunction::directed_cut(make_ground(n), std::move(arcs));
  }
  if (kind == "table")
    return SetFunction::table(make_ground(n),
                              field<std::vector<double>>(j, "values"));
  if (kind == "budget_additive")
    return SetFunction::budget_additive(make_ground(n),
                                        field<std::vector<double>>(j, "weights"),
                                        field<double>(j, "budget"));
  bad("unknown function kind \"" + kind + "\"");
}

ConstraintFamily constraint_from_json(const Json& j) {
  if (!j.is_object()) bad("constraint must be an object");
  const std::string kind = field<std::string>(j, "kind");
  if (kind == "uniform")
    return ConstraintFamily::uniform(field<int>(j, "n"), field<int>(j, "k"));
  if (kind == "partition")
    return ConstraintFamily::partition(
        field<int>(j, "n"), field<std::vector<std::vector<int>>>(j, "parts"),
        field<std::vector<int>>(j, "caps"));
  if (kind == "graphic")
    return ConstraintFamily::graphic(field<int>(j, "vertices"),
                                     edge_list(j, "edges"));
  if (kind == "matching")
    return ConstraintFamily::matching(
        field<int>(j, "vertices"),
        edge_list(j, j.contains("graph") ? "graph" : "edges"));
  if (kind == "knapsack")
    return ConstraintFamily::knapsack(field<std::vector<double>>(j, "weights"),
                                      field<double>(j, "capacity"));
  if (kind == "explicit") {
    const int n = field<int>(j, "n");
    std::vector<Bitset> sets;
    for (const auto& s : field<std::vector<std::vector<int>>>(j, "sets")) {
      Bitset b(n);
      for (int e : s) {
        if (e < 0 || e >= n) bad("explicit family element out of range");
        b.set(e);
      }
      sets.push_back(std::move(b));
    }
    return ConstraintFamily::explicit_family(n, std::move(sets));
  }
  bad("unknown constraint kind \"" + kind + "\"");
}

SpiInstance instance_from_json(const Json& j) {
  if (!j.is_object()) bad("instance must be an object");
  std::vector<Day> days;
  int assigned = 0;
  int with_support = 0;
  for (const auto& dj : field<Json>(j, "days")) {
    Day d;
    d.probs = field<std::vector<double>>(dj, "probs");
    if (dj.contains("support")) {
      d.support = field<std::vector<int>>(dj, "support");
      ++with_support;
    } else {
      for (size_t i = 0; i < d.probs.size(); ++i) d.support.push_back(assigned++);
    }
    days.push_back(std::move(d));
  }
  if (days.empty()) bad("instance needs a nonempty \"days\" array");
  if (with_support != 0 && with_support != static_cast<int>(days.size()))
    bad("either every day lists its support or none does");
  int universe = 0;
  for (const auto& d : days) universe += static_cast<int>(d.support.size());

  Json cj = field<Json>(j, "constraint");
  const std::string ckind = field<std::string>(cj, "kind");
  if ((ckind == "uniform" || ckind == "partition" || ckind == "explicit") &&
      !cj.contains("n"))
    cj["n"] = static_cast<int>(days.size());
  Json oj = field<Json>(j, "objective");
  if (!oj.contains("n")) oj["n"] = universe;

  return make_instance(std::move(days), constraint_from_json(cj),
                       function_from_json(oj));
}

ParsedExperiment experiment_from_json(const Json& j) {
  if (!j.is_object()) bad("experiment config must be an object");
  ParsedExperiment out{instance_from_json(field<Json>(j, "instance")), {}};
  ExperimentConfig& c = out.config;
  c.epsilon = field_or<double>(j, "epsilon", 0.1);
  const std::string mode = field_or<std::string>(j, "mode", "mcg");
  if (auto m = parse_solve_mode(mode))
    c.solver.mode = *m;
  else
    bad("unknown mode \"" + mode + "\"");
  if (!j.contains("b") || (j.at("b").is_string() &&
                           j.at("b").get<std::string>() == "auto")) {
    c.auto_b = true;
  } else {
    c.solver.b = field<double>(j, "b");
  }
  std::string algo = field_or<std::string>(j, "algo", "");
  if (algo.empty())
    c.algo = out.instance.objective.is_monotone() ? Algo::monotone
                                                  : Algo::general;
  else if (auto a = parse_algo(algo))
    c.algo = *a;
  else
    bad("unknown algo \"" + algo + "\"");
  const std::string adv = field_or<std::string>(j, "adversary", "fixed");
  if (auto a = parse_adversary(adv))
    c.adversary = *a;
  else
    bad("unknown adversary \"" + adv + "\"");
  c.order = field_or<std::vector<int>>(j, "order", {});
  c.reps = field_or<long>(j, "reps", 10000);
  c.seed = field_or<std::uint64_t>(j, "seed", 0);
  c.solver.seed = c.seed;
  c.solver.steps = field_or<int>(j, "steps", 1000);
  const std::string grad = field_or<std::string>(j, "gradient", "exact");
  if (grad == "exact")
    c.solver.gradient = GradientMode::exact;
  else if (grad == "mc")
    c.solver.gradient = GradientMode::monte_carlo;
  else
    bad("unknown gradient mode \"" + grad + "\"");
  c.solver.mc_trials = field_or<long>(j, "mc_trials", 10000);
  c.solver.trace = field_or<bool>(j, "trace", false);
  c.selectability_trials = field_or<long>(j, "selectability_trials", 0);
  c.opt_mc_trials = field_or<long>(j, "opt_mc_trials", 100000);
  c.record_transcripts = field_or<long>(j, "transcripts", 0);
  return out;
}

Json report_to_json(const ExperimentReport& r) {
  Json j;
  j["b"] = r.b;
  j["epsilon"] = r.epsilon;
  j["mode"] = r.mode;
  j["algo"] = r.algo;
  j["adversary"] = r.adversary;
  j["reps"] = r.reps;
  j["seed"] = r.seed;
  j["universe"] = r.universe;
  j["reduced_universe"] = r.reduced_universe;
  j["gamma"] = r.gamma;
  j["gamma_floor"] = r.gamma_floor;
  j["fractional_value"] = r.fractional_value;
  j["empirical_mean"] = r.empirical_mean;
  j["std_error"] = r.std_error;
  j["opt"] = r.opt;
  j["opt_method"] = r.opt_method;
  j["c_formula"] = r.c_formula;
  if (r.c_emp >= 0.0) j["c_emp"] = r.c_emp;
  j["bound_factor"] = r.bound_factor;
  j["bound_value"] = r.bound_value;
  j["pass"] = r.pass;
  if (!r.trace.empty()) {
    Json arr = Json::array();
    for (const auto& p : r.trace)
      arr.push_back(Json{{"time", p.time}, {"value", p.value}});
    j["trace"] = std::move(arr);
  }
  if (!r.transcripts.empty()) {
    Json arr = Json::array();
    for (const auto& t : r.transcripts) arr.push_back(transcript_to_json(t));
    j["transcripts"] = std::move(arr);
  }
  return j;
}

Json transcript_to_json(const RoundingTranscript& t) {
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    Json rec;
    rec["day"] = s.day;
    rec["arrival"] = s.arrival;
    rec["fed"] = s.fed;
    rec["ocrs_accept"] = s.ocrs_accept;
    rec["genuine"] = s.genuine;
    rec["coin"] = s.coin;
    rec["taken"] = s.taken;
    steps.push_back(std::move(rec));
  }
  Json j;
  j["steps"] = std::move(steps);
  j["accepted"] = t.t_alg.to_vector();
  j["value"] = t.value;
  return j;
}

std::string trace_to_csv(const std::vector<TrajectoryPoint>& trace) {
  std::string out = "time,value\n";
  char buf[80];
  for (const auto& p : trace) {
    std::snprintf(buf, sizeof(buf), "%.6g,%.6g\n", p.time, p.value);
    out += buf;
  }
  return out;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    bad(e.what());
  }
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

}  // namespace spi
