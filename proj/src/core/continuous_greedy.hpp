#pragma once

#include <functional>
#include <span>
#include <vector>

#include "core/constraints.hpp"
#include "core/set_function.hpp"

namespace spi {

enum class GradientMode { exact, monte_carlo };

struct IntegratorConfig {
  double horizon = 1.0;  // stop time b in [0,1]
  int steps = 1000;
  GradientMode gradient = GradientMode::exact;
  long mc_trials = 10000;
  std::uint64_t seed = 0;
  int trace_stride = 50;  // checkpoint spacing when a trace is requested
};

struct TrajectoryPoint {
  double time = 0.0;
  std::vector<double> x;
  double value = 0.0;
};

// Gradient of the multilinear extension.  Exact mode enumerates subsets
// (collapse-structured functions differentiate through their base, so the
// enumeration dimension is the base size; it must be <= 20).  Monte Carlo
// mode shares one sample across all coordinates per trial.
std::vector<double> grad_multilinear(const SetFunction& f,
                                     std::span<const double> x,
                                     GradientMode mode = GradientMode::exact,
                                     long trials = 10000,
                                     std::uint64_t seed = 0);

// Linear maximization oracle over the feasible polytope; returns the chosen
// vertex (or fractional optimum for non-matroid relaxations).
using LinearOracle =
    std::function<std::vector<double>(std::span<const double>)>;

// Euler discretization dx = v dt, v the oracle vertex for the current
// gradient.  Requires a monotone objective.
TrajectoryPoint continuous_greedy(const SetFunction& f, const LinearOracle& lin,
                                  int dim, const IntegratorConfig& cfg,
                                  std::vector<TrajectoryPoint>* trace = nullptr);
TrajectoryPoint continuous_greedy(const SetFunction& f,
                                  const ConstraintFamily& p,
                                  const IntegratorConfig& cfg,
                                  std::vector<TrajectoryPoint>* trace = nullptr);

// Measured dynamics dx = v (1 - x) dt with the gradient clipped at zero;
// handles non-monotone objectives and keeps x(b) inside b * P.
TrajectoryPoint measured_continuous_greedy(
    const SetFunction& f, const LinearOracle& lin, int dim,
    const IntegratorConfig& cfg, std::vector<TrajectoryPoint>* trace = nullptr);
TrajectoryPoint measured_continuous_greedy(
    const SetFunction& f, const ConstraintFamily& p, const IntegratorConfig& cfg,
    std::vector<TrajectoryPoint>* trace = nullptr);

// Guarantee factors relative to the best concave-closure value in the
// polytope.
double cg_bound(double b);             // 1 - e^{-b}
double mcg_plain_bound(double b);      // b e^{-b}
// Piecewise refinement for polytopes inside p * [0,1]^n; continuous at the
// breakpoint ln(1/(1-p)); needs p in [0,1).
double mcg_bound(double p, double b);

}  // namespace spi
