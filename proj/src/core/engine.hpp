#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/constraints.hpp"
#include "core/continuous_greedy.hpp"
#include "core/ocrs.hpp"
#include "core/rng.hpp"
#include "core/set_function.hpp"
#include "core/submodular.hpp"

namespace spi {

// One arrival distribution: at most one of the listed universe elements
// shows up, element support[j] with probability probs[j], nothing with the
// leftover mass.
struct Day {
  std::vector<int> support;
  std::vector<double> probs;
};

// Days plus a feasibility family over days plus an objective over the
// universe.  Supports partition the universe.
struct SpiInstance {
  std::vector<Day> days;
  ConstraintFamily day_family;
  SetFunction objective;
  Blowup blowup;            // day -> universe elements
  std::vector<int> parent;  // universe element -> element of the pre-split
                            // instance (identity when never split)

  int n_days() const { return static_cast<int>(days.size()); }
  int universe() const { return blowup.lifted_n; }
  std::vector<double> element_probs() const;  // flat, by universe index
  double max_prob() const;
  ConstraintFamily lifted_family() const;
};

SpiInstance make_instance(std::vector<Day> days, ConstraintFamily day_family,
                          SetFunction objective);

// Split every element into ceil(1/eps) copies carrying an equal share of its
// probability; the objective counts an original element as present when any
// copy is.  Day structure and the day family are unchanged.
SpiInstance reduce_small_probabilities(const SpiInstance& inst, double eps);

std::vector<double> day_marginals(const SpiInstance& inst,
                                  std::span<const double> z);

// Per-day set sampler at marginals z: the realized arrival turns into the
// whole day set with probability Pr[R = {e}] / D(e), otherwise the set is a
// product draw conditioned on not being a singleton.  The combined law is
// exactly the product law.
class DaySampler {
 public:
  DaySampler(const SpiInstance& inst, std::vector<double> z);

  const std::vector<double>& z() const { return z_; }

  // Position into the day's support, -1 when nothing arrives.
  int sample_arrival(int day, Rng& rng) const;

  struct Draw {
    Bitset set;            // over the universe
    bool genuine = false;  // set is exactly the realized singleton
  };
  Draw sample_day_set(int day, int arrival, Rng& rng) const;

  // Pr[day set = {support[pos]} | arrival = support[pos]].
  double genuine_prob(int day, int pos) const;

  // Law over local masks computed branch by branch; needs support size <= 16.
  std::vector<double> exact_law(int day) const;

 private:
  const SpiInstance* inst_;
  std::vector<double> z_;
  struct DayData {
    std::vector<double> zloc;
    std::vector<double> branch;    // genuine_prob per position
    double p_not_single = 0.0;     // Pr[|R| != 1]
    std::vector<double> cond_cdf;  // over masks, empty when support > 16
  };
  std::vector<DayData> data_;
};

enum class Algo { monotone, general };
enum class AdversaryKind { fixed, random_order, adaptive };
enum class SolveMode { cg, mcg, closure };

const char* algo_name(Algo a);
const char* adversary_name(AdversaryKind a);
const char* solve_mode_name(SolveMode m);
std::optional<Algo> parse_algo(const std::string& s);
std::optional<AdversaryKind> parse_adversary(const std::string& s);
std::optional<SolveMode> parse_solve_mode(const std::string& s);

struct RoundingConfig {
  Algo algo = Algo::monotone;
  AdversaryKind adversary = AdversaryKind::fixed;
  std::vector<int> order;  // fixed order; empty means day index order
  double b = 1.0;
  std::uint64_t seed = 0;
};

struct DayRecord {
  int day = -1;
  int arrival = -1;  // position in the day's support, -1 none
  bool fed = false;
  bool ocrs_accept = false;
  bool genuine = false;
  bool coin = true;
  bool taken = false;
};

struct RoundingTranscript {
  std::vector<DayRecord> steps;  // visit order
  Bitset t_alg;
  double value = 0.0;
};

// One rounding run; the scheme is reset on entry.  Randomness comes from the
// (seed, trial) stream, so trials are reproducible in any order.
RoundingTranscript round_once(const SpiInstance& inst, const DaySampler& sampler,
                              GreedyOcrs& scheme, const RoundingConfig& cfg,
                              std::uint64_t trial);

// Linear maximization over {z : 0 <= z <= D, day masses inside the day
// polytope}.  Matroid day families use the exact greedy; matching and
// knapsack solve the relaxation LP.
LinearOracle day_polytope_oracle(const SpiInstance& inst);

struct FractionalResult {
  std::vector<double> z;
  double value = 0.0;  // multilinear value, exact whenever feasible
  std::vector<TrajectoryPoint> trace;
};

struct SolverConfig {
  SolveMode mode = SolveMode::mcg;
  double b = 0.5;
  int steps = 1000;
  GradientMode gradient = GradientMode::exact;
  long mc_trials = 10000;
  std::uint64_t seed = 0;
  bool trace = false;
};

FractionalResult fractional_solution(const SpiInstance& inst,
                                     const SolverConfig& cfg);

// E[max value of a feasible subset of the arrivals], one candidate per day.
// Exact enumeration over arrival tuples; the tuple count is capped at 1e5.
double prophet_opt_exact(const SpiInstance& inst);
McEstimate prophet_opt_mc(const SpiInstance& inst, long trials,
                          std::uint64_t seed);

struct ExperimentConfig {
  double epsilon = 0.1;
  SolverConfig solver;
  bool auto_b = false;  // when set, b comes from the bound optimizer
  Algo algo = Algo::monotone;
  AdversaryKind adversary = AdversaryKind::fixed;
  std::vector<int> order;
  long reps = 10000;
  std::uint64_t seed = 0;
  long selectability_trials = 0;  // 0 skips the empirical estimate
  long opt_mc_trials = 100000;
  long record_transcripts = 0;  // keep the first few runs in the report
};

struct ExperimentReport {
  double b = 0.0;
  double epsilon = 0.0;
  std::string mode, algo, adversary;
  long reps = 0;
  std::uint64_t seed = 0;
  int universe = 0;
  int reduced_universe = 0;
  double gamma = 0.0;
  double gamma_floor = 0.0;  // e^{-b} - eps
  double fractional_value = 0.0;
  double empirical_mean = 0.0;
  double std_error = 0.0;
  double opt = 0.0;
  std::string opt_method;
  double c_formula = 0.0;
  double c_emp = -1.0;  // -1 when not measured
  double bound_factor = 0.0;
  double bound_value = 0.0;
  bool pass = false;
  std::vector<TrajectoryPoint> trace;
  std::vector<RoundingTranscript> transcripts;
};

ExperimentReport run_experiment(const SpiInstance& inst,
                                const ExperimentConfig& cfg);

}  // namespace spi
