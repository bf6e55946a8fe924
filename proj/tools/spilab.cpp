// Command-line front end; talks to the library through the C interface only.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "spi/spi.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct ApiFailure {
  spi_status status;
  std::string message;
};

void check(spi_status s) {
  if (s != SPI_OK) throw ApiFailure{s, spi_last_error()};
}

std::string take_string(char* s) {
  std::string out = s != nullptr ? s : "";
  spi_string_free(s);
  return out;
}

int failure_exit(const ApiFailure& f) {
  std::fprintf(stderr, "error: %s (%s)\n", f.message.c_str(),
               spi_status_name(f.status));
  switch (f.status) {
    case SPI_ERR_INVALID_ARGUMENT:
    case SPI_ERR_DIMENSION_MISMATCH:
    case SPI_ERR_PARSE:
      return kExitUsage;
    default:
      return kExitFail;
  }
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::fputs(text.c_str(), stdout);
    if (!text.empty() && text.back() != '\n') std::fputc('\n', stdout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw ApiFailure{SPI_ERR_INVALID_ARGUMENT, "cannot write " + path};
  out << text;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ApiFailure{SPI_ERR_PARSE, "cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- gap ----

int cmd_gap(int n, double p, bool random_mode, int cases, int nmax,
            std::uint64_t seed, const std::string& format,
            const std::string& out_path) {
  if (random_mode) {
    Json cfg{{"cases", cases}, {"n_max", nmax}, {"seed", seed}};
    char* rep = nullptr;
    check(spi_gap_check(cfg.dump().c_str(), &rep));
    const std::string text = take_string(rep);
    const Json j = Json::parse(text);
    if (format == "json") {
      write_output(text, out_path);
    } else {
      std::ostringstream ss;
      ss << "cases      " << j["cases"].get<int>() << "\n"
         << "violations " << j["violations"].get<int>() << "\n";
      char buf[96];
      std::snprintf(buf, sizeof(buf), "min_slack  %.6g\nmin_ratio  %.6g\n",
                    j["min_slack"].get<double>(), j["min_ratio"].get<double>());
      ss << buf << (j["pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
      write_output(ss.str(), out_path);
    }
    return j["pass"].get<bool>() ? kExitPass : kExitFail;
  }
  double mult = 0, clos = 0, ratio = 0;
  check(spi_star_stats(n, p, &mult, &clos, &ratio));
  const double limit = 1.0 - std::exp(-(1.0 - p));
  if (format == "json") {
    Json j{{"n", n},
           {"p", p},
           {"multilinear", mult},
           {"closure", clos},
           {"ratio", ratio},
           {"limit", limit}};
    write_output(j.dump(2), out_path);
  } else {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "star n=%d p=%.6g\nmultilinear %.10g\nclosure     %.10g\n"
                  "ratio       %.10g\nlimit       %.10g\n",
                  n, p, mult, clos, ratio, limit);
    write_output(buf, out_path);
  }
  return kExitPass;
}

// ---- mcg-bound ----

int cmd_mcg_bound(double p, double b, const std::string& format,
                  const std::string& out_path) {
  double mcg = 0, plain = 0, cg = 0;
  check(spi_mcg_bound(p, b, &mcg));
  check(spi_mcg_plain_bound(b, &plain));
  check(spi_cg_bound(b, &cg));
  if (format == "json") {
    Json j{{"p", p}, {"b", b}, {"mcg", mcg}, {"mcg_plain", plain}, {"cg", cg}};
    write_output(j.dump(2), out_path);
  } else {
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "p=%.6g b=%.6g\nmcg       %.6g\nmcg_plain %.6g\ncg        %.6g\n",
                  p, b, mcg, plain, cg);
    write_output(buf, out_path);
  }
  return kExitPass;
}

// ---- table1 ----

int cmd_table(double k, const std::string& format, const std::string& out_path) {
  char* text = nullptr;
  check(spi_table(k, format.c_str(), &text));
  write_output(take_string(text), out_path);
  return kExitPass;
}

// ---- simulate ----

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 const std::string& trace_path, bool quiet) {
  Json cfg = Json::parse(slurp(config_path), nullptr, false);
  if (cfg.is_discarded())
    throw ApiFailure{SPI_ERR_PARSE, "config is not valid JSON"};
  if (cfg.contains("instance_path")) {
    const auto base = std::filesystem::path(config_path).parent_path();
    const auto ip = base / cfg["instance_path"].get<std::string>();
    Json inst = Json::parse(slurp(ip.string()), nullptr, false);
    if (inst.is_discarded())
      throw ApiFailure{SPI_ERR_PARSE, "instance is not valid JSON"};
    cfg.erase("instance_path");
    cfg["instance"] = std::move(inst);
  }
  if (!trace_path.empty()) cfg["trace"] = true;

  char* rep = nullptr;
  check(spi_simulate(cfg.dump().c_str(), &rep));
  const std::string text = take_string(rep);
  const Json j = Json::parse(text);
  if (!trace_path.empty() && j.contains("trace")) {
    std::string csv = "time,value\n";
    char buf[80];
    for (const auto& pt : j["trace"]) {
      std::snprintf(buf, sizeof(buf), "%.6g,%.6g\n",
                    pt["time"].get<double>(), pt["value"].get<double>());
      csv += buf;
    }
    write_output(csv, trace_path);
  }
  if (!quiet || !out_path.empty()) write_output(text, out_path);
  return j["pass"].get<bool>() ? kExitPass : kExitFail;
}

// ---- verify-lemmas ----

int cmd_verify_lemmas(std::uint64_t seed, long cases, const std::string& format,
                      const std::string& out_path) {
  char* rep = nullptr;
  check(spi_verify_lemmas(seed, cases, &rep));
  const std::string text = take_string(rep);
  const Json j = Json::parse(text);
  if (format == "json") {
    write_output(text, out_path);
  } else {
    std::ostringstream ss;
    for (const auto& l : j["lemmas"]) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%-24s cases=%-6d violations=%-3d min_slack=%.3g\n",
                    l["name"].get<std::string>().c_str(), l["cases"].get<int>(),
                    l["violations"].get<int>(), l["min_slack"].get<double>());
      ss << buf;
    }
    ss << (j["all_pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
    write_output(ss.str(), out_path);
  }
  return j["all_pass"].get<bool>() ? kExitPass : kExitFail;
}

// ---- opt ----

int cmd_opt(const std::string& constraint, double k, bool general,
            const std::string& format, const std::string& out_path) {
  double b_star = 0, ratio = 0;
  check(spi_optimize_ratio(constraint.c_str(), general ? 0 : 1, k, &b_star,
                           &ratio));
  const double reciprocal = ratio > 0 ? 1.0 / ratio : 0.0;
  if (format == "json") {
    Json j{{"constraint", constraint},
           {"objective", general ? "general" : "monotone"},
           {"b_star", b_star},
           {"ratio", ratio},
           {"reciprocal", reciprocal}};
    write_output(j.dump(2), out_path);
  } else {
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "%s (%s)\nb*         %.6g\nratio      %.6g\nreciprocal %.6g\n",
                  constraint.c_str(), general ? "general" : "monotone", b_star,
                  ratio, reciprocal);
    write_output(buf, out_path);
  }
  return kExitPass;
}

// ---- selectability ----

int cmd_selectability(const std::string& kind, int n, int k, double b,
                      long trials, std::uint64_t seed, const std::string& format,
                      const std::string& out_path) {
  Json cj;
  if (kind == "uniform") {
    cj = Json{{"kind", "uniform"}, {"n", n}, {"k", k}};
  } else {
    throw ApiFailure{SPI_ERR_INVALID_ARGUMENT,
                     "selectability supports the uniform kind"};
  }
  spi_constraint* c = nullptr;
  check(spi_constraint_from_json(cj.dump().c_str(), &c));
  std::unique_ptr<spi_constraint, decltype(&spi_constraint_free)> guard(
      c, spi_constraint_free);
  std::vector<double> x(n, b * k / n);
  double est = 0, err = 0;
  check(spi_selectability_estimate(c, b, x.data(), n, trials, seed, &est, &err));
  double formula = 0, matroid_floor = 0;
  check(spi_selectability_formula("uniform", k, b, &formula));
  check(spi_selectability_formula("matroid", 0, b, &matroid_floor));
  if (format == "json") {
    Json j{{"kind", kind},       {"n", n},
           {"k", k},             {"b", b},
           {"trials", trials},   {"seed", seed},
           {"min_estimate", est}, {"std_error", err},
           {"rank_formula", formula}, {"matroid_formula", matroid_floor}};
    write_output(j.dump(2), out_path);
  } else {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "uniform n=%d k=%d b=%.6g trials=%ld\nmin_estimate    %.6g\n"
                  "std_error       %.6g\nrank_formula    %.6g\nmatroid_formula %.6g\n",
                  n, k, b, trials, est, err, formula, matroid_floor);
    write_output(buf, out_path);
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"submodular prophet inequality laboratory"};
  app.require_subcommand(1);
  std::string format = "text", out_path;
  app.add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--out", out_path, "write output to this file");

  auto* gap = app.add_subcommand("gap", "correlation-gap diagnostics");
  int gap_n = 1000;
  double gap_p = 0.5;
  bool gap_random = false;
  int gap_cases = 200, gap_nmax = 10;
  std::uint64_t gap_seed = 0;
  gap->add_option("--n", gap_n, "star spokes");
  gap->add_option("--p", gap_p, "hub mass")->check(CLI::Range(0.0, 1.0));
  gap->add_flag("--random", gap_random, "randomized verification instead");
  gap->add_option("--cases", gap_cases, "random cases");
  gap->add_option("--nmax", gap_nmax, "max ground size");
  gap->add_option("--seed", gap_seed, "seed");

  auto* mb = app.add_subcommand("mcg-bound", "guarantee factors at (p, b)");
  double mb_p = 0.0, mb_b = 1.0;
  mb->add_option("--p", mb_p, "coordinate cap")->check(CLI::Range(0.0, 1.0));
  mb->add_option("--b", mb_b, "stop time")->check(CLI::Range(0.0, 1.0));

  auto* tb = app.add_subcommand("table1", "competitive-ratio table");
  double tb_k = 0.0;
  std::string tb_format;
  tb->add_option("--k", tb_k, "also print finite-rank uniform rows");
  tb->add_option("--table-format", tb_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* sim = app.add_subcommand("simulate", "run a rounding experiment");
  std::string sim_config, sim_trace;
  bool sim_quiet = false;
  sim->add_option("--config", sim_config, "experiment JSON")->required();
  sim->add_option("--trace", sim_trace, "write the trajectory CSV here");
  sim->add_flag("--quiet", sim_quiet, "suppress stdout report");

  auto* vl = app.add_subcommand("verify-lemmas", "sampling-lemma suite");
  std::uint64_t vl_seed = 0;
  long vl_cases = 100;
  vl->add_option("--seed", vl_seed, "seed");
  vl->add_option("--cases", vl_cases, "cases per lemma");

  auto* opt = app.add_subcommand("opt", "optimize the end-to-end factor");
  std::string opt_constraint = "matroid";
  double opt_k = 0.0;
  bool opt_general = false;
  opt->add_option("--constraint", opt_constraint,
                  "uniform, uniform-inf, matroid, matching, knapsack");
  opt->add_option("--k", opt_k, "rank for uniform");
  opt->add_flag("--general", opt_general, "general objective");

  auto* sel = app.add_subcommand("selectability", "empirical greedy selectability");
  std::string sel_kind = "uniform";
  int sel_n = 8, sel_k = 2;
  double sel_b = 0.5;
  long sel_trials = 100000;
  std::uint64_t sel_seed = 0;
  sel->add_option("--kind", sel_kind, "constraint kind");
  sel->add_option("--n", sel_n, "ground size");
  sel->add_option("--k", sel_k, "rank");
  sel->add_option("--b", sel_b, "scale")->check(CLI::Range(0.0, 1.0));
  sel->add_option("--trials", sel_trials, "trials");
  sel->add_option("--seed", sel_seed, "seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gap->parsed())
      return cmd_gap(gap_n, gap_p, gap_random, gap_cases, gap_nmax, gap_seed,
                     format, out_path);
    if (mb->parsed()) return cmd_mcg_bound(mb_p, mb_b, format, out_path);
    if (tb->parsed()) {
      if (tb_format.empty()) tb_format = format == "json" ? "json" : "csv";
      return cmd_table(tb_k, tb_format, out_path);
    }
    if (sim->parsed())
      return cmd_simulate(sim_config, out_path, sim_trace, sim_quiet);
    if (vl->parsed()) return cmd_verify_lemmas(vl_seed, vl_cases, format, out_path);
    if (opt->parsed())
      return cmd_opt(opt_constraint, opt_k, opt_general, format, out_path);
    if (sel->parsed())
      return cmd_selectability(sel_kind, sel_n, sel_k, sel_b, sel_trials,
                               sel_seed, format, out_path);
  } catch (const ApiFailure& f) {
    return failure_exit(f);
  }
  return kExitUsage;
}
