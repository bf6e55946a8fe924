#include "core/continuous_greedy.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/submodular.hpp"

namespace spi {

namespace {

std::vector<double> grad_exact(const SetFunction& f,
                               const std::vector<double>& x) {
  if (const SetFunction* base = f.collapse_base()) {
    const auto& map = *f.collapse_map();
    const int bn = base->n();
    std::vector<double> off(bn, 1.0);
    for (size_t e = 0; e < map.size(); ++e) off[map[e]] *= 1.0 - x[e];
    std::vector<double> m(bn);
    for (int t = 0; t < bn; ++t) m[t] = 1.0 - off[t];
    std::vector<double> gb = grad_exact(*base, m);
    std::vector<double> g(x.size());
    for (size_t e = 0; e < map.size(); ++e) {
      int t = map[e];
      double factor;
      if (1.0 - x[e] > 1e-9) {
        factor = off[t] / (1.0 - x[e]);
      } else {
        factor = 1.0;
        for (size_t c = 0; c < map.size(); ++c)
          if (c != e && map[c] == t) factor *= 1.0 - x[c];
      }
      g[e] = gb[t] * factor;
    }
    return g;
  }

  const int n = f.n();
  require(n <= 20, Errc::ground_set_too_large,
          "exact gradient needs enumeration dimension <= 20");
  const std::uint64_t lim = std::uint64_t{1} << n;
  std::vector<double> vals(lim);
  for (std::uint64_t m = 0; m < lim; ++m) vals[m] = f.value_mask(m);

  std::vector<double> g(n, 0.0);
  std::vector<char> saturated(n, 0);
  for (int i = 0; i < n; ++i) saturated[i] = 1.0 - x[i] < 1e-9;
  for (std::uint64_t m = 0; m < lim; ++m) {
    double w = 1.0;
    for (int i = 0; i < n && w > 0.0; ++i)
      w *= (m >> i) & 1 ? x[i] : 1.0 - x[i];
    if (w <= 0.0) continue;
    for (int i = 0; i < n; ++i) {
      if ((m >> i) & 1 || saturated[i]) continue;
      // w carries the (1-x_i) factor of the off coordinate.
      g[i] += w / (1.0 - x[i]) * (vals[m | (std::uint64_t{1} << i)] - vals[m]);
    }
  }
  // Coordinates pinned at 1 need the direct conditional sum.
  for (int i = 0; i < n; ++i) {
    if (!saturated[i]) continue;
    double acc = 0.0;
    for (std::uint64_t m = 0; m < lim; ++m) {
      if ((m >> i) & 1) continue;
      double w = 1.0;
      for (int j = 0; j < n && w > 0.0; ++j) {
        if (j == i) continue;
        w *= (m >> j) & 1 ? x[j] : 1.0 - x[j];
      }
      if (w > 0.0)
        acc += w * (vals[m | (std::uint64_t{1} << i)] - vals[m]);
    }
    g[i] = acc;
  }
  return g;
}

std::vector<double> grad_mc(const SetFunction& f, const std::vector<double>& x,
                            long trials, std::uint64_t seed) {
  require(trials > 0, Errc::invalid_argument, "trials must be positive");
  const int n = f.n();
  std::vector<double> g(n, 0.0);
  Bitset s(n);
  for (long t = 0; t < trials; ++t) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t));
    s.clear();
    for (int i = 0; i < n; ++i)
      if (rng.uniform() < x[i]) s.set(i);
    // One shared sample serves every coordinate.
    for (int i = 0; i < n; ++i)
      g[i] += f.value(s.with(i)) - f.value(s.without(i));
  }
  for (double& v : g) v /= static_cast<double>(trials);
  return g;
}

double value_estimate(const SetFunction& f, const std::vector<double>& x,
                      const IntegratorConfig& cfg) {
  const SetFunction* base = f.collapse_base();
  int dim = base ? base->n() : f.n();
  if (dim <= 24) return multilinear_exact(f, x);
  return multilinear_mc(f, x, cfg.mc_trials, cfg.seed ^ 0x5eedu).estimate;
}

TrajectoryPoint integrate(const SetFunction& f, const LinearOracle& lin,
                          int dim, const IntegratorConfig& cfg, bool measured,
                          std::vector<TrajectoryPoint>* trace) {
  require(dim > 0, Errc::invalid_argument, "empty dimension");
  require(cfg.horizon >= 0.0 && cfg.horizon <= 1.0, Errc::invalid_argument,
          "horizon must be in [0,1]");
  require(cfg.steps > 0, Errc::invalid_argument, "steps must be positive");
  if (!measured)
    require(f.is_monotone(), Errc::not_monotone,
            "continuous greedy needs a monotone objective");

  std::vector<double> x(dim, 0.0);
  const double dt = cfg.horizon / cfg.steps;
  for (int step = 0; step < cfg.steps; ++step) {
    std::vector<double> g =
        cfg.gradient == GradientMode::exact
            ? grad_exact(f, x)
            : grad_mc(f, x, cfg.mc_trials,
                      cfg.seed + static_cast<std::uint64_t>(step) * 0x9e37u);
    if (measured)
      for (double& v : g) v = std::max(v, 0.0);
    std::vector<double> v = lin(g);
    require(static_cast<int>(v.size()) == dim, Errc::dimension_mismatch,
            "oracle vertex dimension mismatch");
    for (int i = 0; i < dim; ++i) {
      double dx = measured ? dt * v[i] * (1.0 - x[i]) : dt * v[i];
      x[i] = std::min(1.0, x[i] + dx);
    }
    if (trace && ((step + 1) % std::max(1, cfg.trace_stride) == 0 ||
                  step + 1 == cfg.steps)) {
      TrajectoryPoint tp;
      tp.time = dt * (step + 1);
      tp.x = x;
      tp.value = value_estimate(f, x, cfg);
      trace->push_back(std::move(tp));
    }
  }
  TrajectoryPoint out;
  out.time = cfg.horizon;
  out.x = std::move(x);
  out.value = value_estimate(f, out.x, cfg);
  return out;
}

LinearOracle family_oracle(const ConstraintFamily& p) {
  ConstraintFamily fam = p;
  return [fam](std::span<const double> w) {
    return fam.linear_optimize(w).vertex;
  };
}

}  // namespace

std::vector<double> grad_multilinear(const SetFunction& f,
                                     std::span<const double> x,
                                     GradientMode mode, long trials,
                                     std::uint64_t seed) {
  require(static_cast<int>(x.size()) == f.n(), Errc::dimension_mismatch,
          "point dimension mismatch");
  std::vector<double> xs(x.begin(), x.end());
  for (double& v : xs) {
    require(v >= -1e-9 && v <= 1.0 + 1e-9, Errc::invalid_argument,
            "coordinates must lie in [0,1]");
    v = std::clamp(v, 0.0, 1.0);
  }
  return mode == GradientMode::exact ? grad_exact(f, xs)
                                     : grad_mc(f, xs, trials, seed);
}

TrajectoryPoint continuous_greedy(const SetFunction& f, const LinearOracle& lin,
                                  int dim, const IntegratorConfig& cfg,
                                  std::vector<TrajectoryPoint>* trace) {
  return integrate(f, lin, dim, cfg, /*measured=*/false, trace);
}

TrajectoryPoint continuous_greedy(const SetFunction& f,
                                  const ConstraintFamily& p,
                                  const IntegratorConfig& cfg,
                                  std::vector<TrajectoryPoint>* trace) {
  require(p.n() == f.n(), Errc::dimension_mismatch,
          "constraint ground size mismatch");
  return integrate(f, family_oracle(p), f.n(), cfg, false, trace);
}

TrajectoryPoint measured_continuous_greedy(const SetFunction& f,
                                           const LinearOracle& lin, int dim,
                                           const IntegratorConfig& cfg,
                                           std::vector<TrajectoryPoint>* trace) {
  return integrate(f, lin, dim, cfg, /*measured=*/true, trace);
}

TrajectoryPoint measured_continuous_greedy(const SetFunction& f,
                                           const ConstraintFamily& p,
                                           const IntegratorConfig& cfg,
                                           std::vector<TrajectoryPoint>* trace) {
  require(p.n() == f.n(), Errc::dimension_mismatch,
          "constraint ground size mismatch");
  return integrate(f, family_oracle(p), f.n(), cfg, true, trace);
}

double cg_bound(double b) {
  require(b >= 0.0 && b <= 1.0, Errc::invalid_argument, "b must be in [0,1]");
  return 1.0 - std::exp(-b);
}

double mcg_plain_bound(double b) {
  require(b >= 0.0 && b <= 1.0, Errc::invalid_argument, "b must be in [0,1]");
  return b * std::exp(-b);
}

double mcg_bound(double p, double b) {
  require(p >= 0.0 && p < 1.0, Errc::invalid_argument,
          "coordinate cap p must be in [0,1)");
  require(b >= 0.0 && b <= 1.0, Errc::invalid_argument, "b must be in [0,1]");
  const double breakpoint = std::log(1.0 / (1.0 - p));
  if (b <= breakpoint) return b * std::exp(-b);
  return 1.0 - p - std::exp(-b) * (1.0 + std::log(1.0 - p));
}

}  // namespace spi
