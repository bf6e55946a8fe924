#include "engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>

#include "core/bounds.hpp"
#include "core/error.hpp"
#include "core/simplex.hpp"

namespace spi {

namespace {
constexpr double kProbTol = 1e-9;
}

std::vector<double> SpiInstance::element_probs() const {
  std::vector<double> d(universe(), 0.0);
  for (const auto& day : days)
    for (size_t j = 0; j < day.support.size(); ++j)
      d[day.support[j]] = day.probs[j];
  return d;
}

double SpiInstance::max_prob() const {
  double p = 0.0;
  for (const auto& day : days)
    for (double q : day.probs) p = std::max(p, q);
  return p;
}

ConstraintFamily SpiInstance::lifted_family() const {
  return ConstraintFamily::partition_extension(day_family, blowup);
}

SpiInstance make_instance(std::vector<Day> days, ConstraintFamily day_family,
                          SetFunction objective) {
  require(!days.empty(), Errc::invalid_argument, "instance needs days");
  require(day_family.valid() && objective.valid(), Errc::invalid_argument,
          "instance needs a day family and an objective");
  require(day_family.n() == static_cast<int>(days.size()),
          Errc::dimension_mismatch, "day family size != number of days");
  std::vector<std::vector<int>> parts;
  parts.reserve(days.size());
  for (const auto& day : days) {
    require(!day.support.empty(), Errc::invalid_argument, "empty day support");
    require(day.support.size() == day.probs.size(), Errc::dimension_mismatch,
            "day support/probs length mismatch");
    double total = 0.0;
    for (double q : day.probs) {
      require(q > 0.0 && q <= 1.0 + kProbTol, Errc::invalid_argument,
              "arrival probabilities must lie in (0,1]");
      total += q;
    }
    require(total <= 1.0 + kProbTol, Errc::invalid_argument,
            "day probabilities sum above one");
    parts.push_back(day.support);
  }
  SpiInstance inst;
  inst.days = std::move(days);
  inst.day_family = std::move(day_family);
  inst.objective = std::move(objective);
  inst.blowup = Blowup::from_parts(std::move(parts));
  require(inst.objective.n() == inst.blowup.lifted_n, Errc::dimension_mismatch,
          "objective ground size != universe size");
  inst.parent.resize(inst.blowup.lifted_n);
  std::iota(inst.parent.begin(), inst.parent.end(), 0);
  return inst;
}

SpiInstance reduce_small_probabilities(const SpiInstance& inst, double eps) {
  require(eps > 0.0 && eps <= 1.0, Errc::invalid_argument,
          "eps must lie in (0,1]");
  const int h = static_cast<int>(std::ceil(1.0 / eps - 1e-12));
  std::vector<Day> days;
  days.reserve(inst.days.size());
  std::vector<int> to_base;
  int next = 0;
  for (const auto& day : inst.days) {
    Day d;
    for (size_t j = 0; j < day.support.size(); ++j) {
      for (int c = 0; c < h; ++c) {
        d.support.push_back(next++);
        d.probs.push_back(day.probs[j] / h);
        to_base.push_back(day.support[j]);
      }
    }
    days.push_back(std::move(d));
  }
  SetFunction g =
      SetFunction::collapse(inst.objective, make_ground(next), to_base);
  SpiInstance out = make_instance(std::move(days), inst.day_family, std::move(g));
  out.parent = std::move(to_base);
  return out;
}

std::vector<double> day_marginals(const SpiInstance& inst,
                                  std::span<const double> z) {
  require(static_cast<int>(z.size()) == inst.universe(), Errc::dimension_mismatch,
          "marginal vector size != universe");
  std::vector<double> y(inst.n_days(), 0.0);
  for (int e = 0; e < inst.universe(); ++e) y[inst.blowup.part_of[e]] += z[e];
  return y;
}

// ---------------------------------------------------------------------------
// DaySampler

DaySampler::DaySampler(const SpiInstance& inst, std::vector<double> z)
    : inst_(&inst), z_(std::move(z)) {
  require(static_cast<int>(z_.size()) == inst.universe(),
          Errc::dimension_mismatch, "marginal vector size != universe");
  data_.resize(inst.n_days());
  for (int i = 0; i < inst.n_days(); ++i) {
    const Day& day = inst.days[i];
    DayData& d = data_[i];
    const int m = static_cast<int>(day.support.size());
    d.zloc.resize(m);
    for (int j = 0; j < m; ++j) {
      d.zloc[j] = z_[day.support[j]];
      require(d.zloc[j] >= -1e-12, Errc::invalid_argument,
              "negative marginal");
      d.zloc[j] = std::clamp(d.zloc[j], 0.0, 1.0);
      require(d.zloc[j] <= day.probs[j] + 1e-9,
              Errc::marginal_exceeds_distribution,
              "marginal above the arrival probability");
    }
    d.branch.resize(m);
    double p_empty = 1.0;
    for (int j = 0; j < m; ++j) p_empty *= 1.0 - d.zloc[j];
    double p_single = 0.0;
    for (int j = 0; j < m; ++j) {
      double pr = d.zloc[j];
      for (int k = 0; k < m; ++k)
        if (k != j) pr *= 1.0 - d.zloc[k];
      p_single += pr;
      d.branch[j] = std::min(1.0, pr / day.probs[j]);
    }
    d.p_not_single = std::max(0.0, 1.0 - p_single);
    if (m <= 16) {
      const int masks = 1 << m;
      d.cond_cdf.assign(masks, 0.0);
      double acc = 0.0;
      for (int s = 0; s < masks; ++s) {
        double pr = 1.0;
        for (int j = 0; j < m; ++j)
          pr *= (s >> j) & 1 ? d.zloc[j] : 1.0 - d.zloc[j];
        if (std::popcount(static_cast<unsigned>(s)) != 1) acc += pr;
        d.cond_cdf[s] = acc;
      }
      // acc == p_not_single up to roundoff; normalize the cdf.
      if (acc > 0.0)
        for (double& v : d.cond_cdf) v /= acc;
    }
  }
}

int DaySampler::sample_arrival(int day, Rng& rng) const {
  const Day& d = inst_->days[day];
  double u = rng.uniform();
  for (size_t j = 0; j < d.probs.size(); ++j) {
    if (u < d.probs[j]) return static_cast<int>(j);
    u -= d.probs[j];
  }
  return -1;
}

double DaySampler::genuine_prob(int day, int pos) const {
  return data_[day].branch[pos];
}

DaySampler::Draw DaySampler::sample_day_set(int day, int arrival,
                                            Rng& rng) const {
  const Day& info = inst_->days[day];
  const DayData& d = data_[day];
  const int m = static_cast<int>(info.support.size());
  Draw out;
  out.set = Bitset(inst_->universe());
  if (arrival >= 0 && rng.uniform() < d.branch[arrival]) {
    out.set.set(info.support[arrival]);
    out.genuine = true;
    return out;
  }
  if (d.p_not_single <= 0.0) return out;  // conditioning event has no mass
  if (!d.cond_cdf.empty()) {
    const double u = rng.uniform();
    const auto it =
        std::upper_bound(d.cond_cdf.begin(), d.cond_cdf.end(), u);
    int mask = static_cast<int>(std::min<std::ptrdiff_t>(
        it - d.cond_cdf.begin(), static_cast<std::ptrdiff_t>(d.cond_cdf.size()) - 1));
    for (int j = 0; j < m; ++j)
      if ((mask >> j) & 1) out.set.set(info.support[j]);
    return out;
  }
  for (long attempt = 0; attempt < 1000000; ++attempt) {
    int count = 0;
    out.set.clear();
    for (int j = 0; j < m; ++j) {
      if (rng.uniform() < d.zloc[j]) {
        out.set.set(info.support[j]);
        ++count;
      }
    }
    if (count != 1) return out;
  }
  fail(Errc::internal, "day-set rejection sampling exceeded its attempt cap");
}

std::vector<double> DaySampler::exact_law(int day) const {
  const Day& info = inst_->days[day];
  const DayData& d = data_[day];
  const int m = static_cast<int>(info.support.size());
  require(m <= 16, Errc::subset_too_large, "exact law needs support <= 16");
  const int masks = 1 << m;
  std::vector<double> law(masks, 0.0);
  double p_branch2 = 1.0;
  for (int j = 0; j < m; ++j) {
    law[1 << j] += info.probs[j] * d.branch[j];
    p_branch2 -= info.probs[j] * d.branch[j];
  }
  if (d.p_not_single > 0.0) {
    for (int s = 0; s < masks; ++s) {
      if (std::popcount(static_cast<unsigned>(s)) == 1) continue;
      double pr = 1.0;
      for (int j = 0; j < m; ++j)
        pr *= (s >> j) & 1 ? d.zloc[j] : 1.0 - d.zloc[j];
      law[s] += p_branch2 * pr / d.p_not_single;
    }
  }
  return law;
}

// ---------------------------------------------------------------------------
// Names

const char* algo_name(Algo a) {
  return a == Algo::monotone ? "monotone" : "general";
}
const char* adversary_name(AdversaryKind a) {
  switch (a) {
    case AdversaryKind::fixed: return "fixed";
    case AdversaryKind::random_order: return "random";
    case AdversaryKind::adaptive: return "adaptive";
  }
  return "?";
}
const char* solve_mode_name(SolveMode m) {
  switch (m) {
    case SolveMode::cg: return "cg";
    case SolveMode::mcg: return "mcg";
    case SolveMode::closure: return "closure";
  }
  return "?";
}

std::optional<Algo> parse_algo(const std::string& s) {
  if (s == "monotone") return Algo::monotone;
  if (s == "general") return Algo::general;
  return std::nullopt;
}
std::optional<AdversaryKind> parse_adversary(const std::string& s) {
  if (s == "fixed") return AdversaryKind::fixed;
  if (s == "random" || s == "random-order") return AdversaryKind::random_order;
  if (s == "adaptive") return AdversaryKind::adaptive;
  return std::nullopt;
}
std::optional<SolveMode> parse_solve_mode(const std::string& s) {
  if (s == "cg") return SolveMode::cg;
  if (s == "mcg") return SolveMode::mcg;
  if (s == "closure") return SolveMode::closure;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Rounding

RoundingTranscript round_once(const SpiInstance& inst, const DaySampler& sampler,
                              GreedyOcrs& scheme, const RoundingConfig& cfg,
                              std::uint64_t trial) {
  const int nd = inst.n_days();
  scheme.reset();
  Rng rng = Rng::stream(cfg.seed, trial);

  // Realization table first, in day order, so the adaptive adversary sees a
  // well-defined world no matter when days are played.
  std::vector<int> arrivals(nd);
  for (int i = 0; i < nd; ++i) arrivals[i] = sampler.sample_arrival(i, rng);

  std::vector<int> order;
  if (cfg.adversary == AdversaryKind::fixed) {
    if (cfg.order.empty()) {
      order.resize(nd);
      std::iota(order.begin(), order.end(), 0);
    } else {
      require(static_cast<int>(cfg.order.size()) == nd, Errc::invalid_argument,
              "day order must list every day once");
      std::vector<char> seen(nd, 0);
      for (int i : cfg.order) {
        require(i >= 0 && i < nd && !seen[i], Errc::invalid_argument,
                "day order must list every day once");
        seen[i] = 1;
      }
      order = cfg.order;
    }
  } else if (cfg.adversary == AdversaryKind::random_order) {
    order.resize(nd);
    std::iota(order.begin(), order.end(), 0);
    for (int i = nd - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.uniform_int(i + 1));
      std::swap(order[i], order[j]);
    }
  }

  RoundingTranscript out;
  out.t_alg = Bitset(inst.universe());
  std::vector<char> played(nd, 0);
  const double coin_factor = cfg.algo == Algo::general ? 0.5 : 1.0;

  for (int step = 0; step < nd; ++step) {
    int day;
    if (cfg.adversary == AdversaryKind::adaptive) {
      // Play the day whose expected immediate contribution is smallest:
      // junk days first, so capacity is consumed before the good arrivals.
      day = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < nd; ++i) {
        if (played[i]) continue;
        double score = 0.0;
        if (arrivals[i] >= 0) {
          const int e = inst.days[i].support[arrivals[i]];
          if (scheme.family_member(scheme.accepted().with(i))) {
            const double gain = inst.objective(out.t_alg.with(e)) -
                                inst.objective(out.t_alg);
            score = sampler.genuine_prob(i, arrivals[i]) * coin_factor * gain;
          }
        }
        if (score < best - 1e-15) {
          best = score;
          day = i;
        }
      }
    } else {
      day = order[step];
    }
    played[day] = 1;

    DayRecord rec;
    rec.day = day;
    rec.arrival = arrivals[day];
    DaySampler::Draw draw = sampler.sample_day_set(day, arrivals[day], rng);
    rec.genuine = draw.genuine;
    if (!draw.set.empty()) {
      rec.fed = true;
      rec.ocrs_accept = scheme.offer(day, true);
    }
    if (rec.ocrs_accept && rec.genuine) {
      bool keep = true;
      if (cfg.algo == Algo::general) keep = rng.uniform() < 0.5;
      rec.coin = keep;
      if (keep) {
        out.t_alg.set(inst.days[day].support[rec.arrival]);
        rec.taken = true;
      }
    }
    out.steps.push_back(rec);
  }
  out.value = inst.objective(out.t_alg);
  return out;
}

// ---------------------------------------------------------------------------
// Linear optimization over the day polytope with the arrival-probability box

namespace {

// Largest t with y + t e_i still inside the day polytope.
double day_slack(const ConstraintFamily& fam, const std::vector<double>& y,
                 double y_total, int i) {
  switch (fam.kind()) {
    case ConstraintKind::uniform:
      return std::min(1.0 - y[i], fam.uniform_k() - y_total);
    case ConstraintKind::partition: {
      const auto& parts = fam.parts();
      const auto& caps = fam.caps();
      for (size_t p = 0; p < parts.size(); ++p) {
        for (int j : parts[p]) {
          if (j == i) {
            double part_mass = 0.0;
            for (int q : parts[p]) part_mass += y[q];
            return std::min(1.0 - y[i], caps[p] - part_mass);
          }
        }
      }
      return 1.0 - y[i];
    }
    default: {
      // Rank inequalities over all subsets holding i; exact for any matroid.
      const int n = fam.n();
      require(n <= 16, Errc::ground_set_too_large,
              "generic matroid slack needs at most 16 days");
      double slack = std::numeric_limits<double>::infinity();
      const std::uint64_t all = (n == 64) ? ~0ull : ((1ull << n) - 1);
      const std::uint64_t rest = all & ~(1ull << i);
      // Subsets containing i: i plus any subset of the rest.
      std::uint64_t sub = 0;
      while (true) {
        const std::uint64_t mask = sub | (1ull << i);
        double mass = 0.0;
        for (int j = 0; j < n; ++j)
          if ((mask >> j) & 1) mass += y[j];
        slack = std::min(
            slack, fam.rank(Bitset::from_mask(n, mask)) - mass);
        if (sub == rest) break;
        sub = (sub - rest) & rest;
      }
      return slack;
    }
  }
}

LpProblem day_polytope_lp(const SpiInstance& inst) {
  const int m = inst.universe();
  const auto d = inst.element_probs();
  LpProblem lp;
  lp.num_vars = m;
  lp.objective.assign(m, 0.0);
  for (int e = 0; e < m; ++e) {
    LpRow box;
    box.a.assign(m, 0.0);
    box.a[e] = 1.0;
    box.type = RowType::le;
    box.rhs = d[e];
    lp.rows.push_back(std::move(box));
  }
  const ConstraintFamily& fam = inst.day_family;
  auto day_row = [&](const std::vector<double>& day_coeff, double rhs) {
    LpRow row;
    row.a.assign(m, 0.0);
    for (int e = 0; e < m; ++e)
      row.a[e] = day_coeff[inst.blowup.part_of[e]];
    row.type = RowType::le;
    row.rhs = rhs;
    lp.rows.push_back(std::move(row));
  };
  const int nd = inst.n_days();
  std::vector<double> coeff(nd, 0.0);
  // Every kind bounds each day mass by one.
  for (int i = 0; i < nd; ++i) {
    coeff.assign(nd, 0.0);
    coeff[i] = 1.0;
    day_row(coeff, 1.0);
  }
  switch (fam.kind()) {
    case ConstraintKind::matching: {
      std::vector<std::vector<int>> touching(fam.vertices());
      for (int i = 0; i < nd; ++i) {
        touching[fam.edges()[i].first].push_back(i);
        touching[fam.edges()[i].second].push_back(i);
      }
      for (const auto& tv : touching) {
        if (tv.empty()) continue;
        coeff.assign(nd, 0.0);
        for (int i : tv) coeff[i] = 1.0;
        day_row(coeff, 1.0);
      }
      break;
    }
    case ConstraintKind::knapsack: {
      coeff = fam.knapsack_weights();
      day_row(coeff, fam.knapsack_capacity());
      break;
    }
    default:
      fail(Errc::invalid_argument,
           "LP day oracle handles matching and knapsack kinds");
  }
  return lp;
}

}  // namespace

LinearOracle day_polytope_oracle(const SpiInstance& inst) {
  const int m = inst.universe();
  const auto d = inst.element_probs();
  if (inst.day_family.is_matroid()) {
    // Polymatroid greedy: sweep elements by weight, push each as far as the
    // box and the day polytope allow.
    return [inst, d, m](std::span<const double> w) {
      require(static_cast<int>(w.size()) == m, Errc::dimension_mismatch,
              "weight vector size != universe");
      std::vector<int> idx(m);
      std::iota(idx.begin(), idx.end(), 0);
      std::stable_sort(idx.begin(), idx.end(),
                       [&](int a, int b) { return w[a] > w[b]; });
      std::vector<double> z(m, 0.0), y(inst.n_days(), 0.0);
      double y_total = 0.0;
      for (int e : idx) {
        if (w[e] <= 1e-15) break;
        const int day = inst.blowup.part_of[e];
        const double slack = day_slack(inst.day_family, y, y_total, day);
        const double t = std::min(d[e], std::max(0.0, slack));
        if (t <= 0.0) continue;
        z[e] = t;
        y[day] += t;
        y_total += t;
      }
      return z;
    };
  }
  LpProblem lp = day_polytope_lp(inst);
  return [lp, m](std::span<const double> w) mutable {
    require(static_cast<int>(w.size()) == m, Errc::dimension_mismatch,
            "weight vector size != universe");
    lp.objective.assign(w.begin(), w.end());
    LpResult res = simplex_maximize(lp);
    require(res.status == LpStatus::optimal, Errc::internal,
            "day polytope LP did not solve");
    res.x.resize(m);
    return res.x;
  };
}

// ---------------------------------------------------------------------------
// Fractional solve

namespace {

FractionalResult closure_solution(const SpiInstance& inst, double b) {
  const int m = inst.universe();
  require(m <= 12, Errc::ground_set_too_large,
          "closure mode enumerates subsets; universe must be <= 12");
  const int cols = 1 << m;
  const auto d = inst.element_probs();
  const ConstraintFamily& fam = inst.day_family;
  const int nd = inst.n_days();

  LpProblem lp;
  lp.num_vars = cols;
  lp.objective.resize(cols);
  for (int s = 0; s < cols; ++s)
    lp.objective[s] = inst.objective.value_mask(static_cast<std::uint64_t>(s));

  LpRow conv;
  conv.a.assign(cols, 1.0);
  conv.type = RowType::eq;
  conv.rhs = 1.0;
  lp.rows.push_back(std::move(conv));

  auto element_count_row = [&](const std::vector<double>& per_element,
                               double rhs) {
    LpRow row;
    row.a.assign(cols, 0.0);
    for (int s = 0; s < cols; ++s) {
      double c = 0.0;
      for (int e = 0; e < m; ++e)
        if ((s >> e) & 1) c += per_element[e];
      row.a[s] = c;
    }
    row.type = RowType::le;
    row.rhs = rhs;
    lp.rows.push_back(std::move(row));
  };

  std::vector<double> pe(m, 0.0);
  for (int e = 0; e < m; ++e) {
    pe.assign(m, 0.0);
    pe[e] = 1.0;
    element_count_row(pe, b * d[e]);
  }
  auto day_mass_row = [&](const std::vector<double>& day_coeff, double rhs) {
    std::vector<double> per(m, 0.0);
    for (int e = 0; e < m; ++e) per[e] = day_coeff[inst.blowup.part_of[e]];
    element_count_row(per, rhs);
  };
  std::vector<double> coeff(nd, 0.0);
  for (int i = 0; i < nd; ++i) {
    coeff.assign(nd, 0.0);
    coeff[i] = 1.0;
    day_mass_row(coeff, b);
  }
  switch (fam.kind()) {
    case ConstraintKind::uniform: {
      coeff.assign(nd, 1.0);
      day_mass_row(coeff, b * fam.uniform_k());
      break;
    }
    case ConstraintKind::partition: {
      for (size_t p = 0; p < fam.parts().size(); ++p) {
        coeff.assign(nd, 0.0);
        for (int i : fam.parts()[p]) coeff[i] = 1.0;
        day_mass_row(coeff, b * fam.caps()[p]);
      }
      break;
    }
    case ConstraintKind::matching: {
      std::vector<std::vector<int>> touching(fam.vertices());
      for (int i = 0; i < nd; ++i) {
        touching[fam.edges()[i].first].push_back(i);
        touching[fam.edges()[i].second].push_back(i);
      }
      for (const auto& tv : touching) {
        if (tv.empty()) continue;
        coeff.assign(nd, 0.0);
        for (int i : tv) coeff[i] = 1.0;
        day_mass_row(coeff, b);
      }
      break;
    }
    case ConstraintKind::knapsack: {
      day_mass_row(fam.knapsack_weights(), b * fam.knapsack_capacity());
      break;
    }
    default: {
      require(nd <= 10, Errc::ground_set_too_large,
              "closure mode with a generic matroid needs at most 10 days");
      for (std::uint64_t s = 1; s < (1ull << nd); ++s) {
        coeff.assign(nd, 0.0);
        for (int i = 0; i < nd; ++i)
          if ((s >> i) & 1) coeff[i] = 1.0;
        day_mass_row(coeff, b * fam.rank(Bitset::from_mask(nd, s)));
      }
      break;
    }
  }

  LpResult res = simplex_maximize(lp);
  require(res.status == LpStatus::optimal, Errc::internal,
          "closure LP did not solve");
  FractionalResult out;
  out.z.assign(m, 0.0);
  for (int s = 0; s < cols; ++s) {
    if (res.x[s] <= 0.0) continue;
    for (int e = 0; e < m; ++e)
      if ((s >> e) & 1) out.z[e] += res.x[s];
  }
  for (double& v : out.z) v = std::clamp(v, 0.0, 1.0);
  out.value = res.value;
  return out;
}

}  // namespace

FractionalResult fractional_solution(const SpiInstance& inst,
                                     const SolverConfig& cfg) {
  require(cfg.b >= 0.0 && cfg.b <= 1.0, Errc::invalid_argument,
          "b must lie in [0,1]");
  if (cfg.mode == SolveMode::closure) return closure_solution(inst, cfg.b);

  IntegratorConfig ic;
  ic.horizon = cfg.b;
  ic.steps = cfg.steps;
  ic.gradient = cfg.gradient;
  ic.mc_trials = cfg.mc_trials;
  ic.seed = cfg.seed;
  LinearOracle lin = day_polytope_oracle(inst);

  FractionalResult out;
  std::vector<TrajectoryPoint>* trace = cfg.trace ? &out.trace : nullptr;
  TrajectoryPoint end =
      cfg.mode == SolveMode::cg
          ? continuous_greedy(inst.objective, lin, inst.universe(), ic, trace)
          : measured_continuous_greedy(inst.objective, lin, inst.universe(), ic,
                                       trace);
  out.z = std::move(end.x);
  out.value = end.value;
  require(membership_p_double_prime(out.z, inst.element_probs(),
                                    inst.day_family, inst.blowup, cfg.b, 1e-6),
          Errc::not_in_polytope, "fractional point left the feasible region");
  return out;
}

// ---------------------------------------------------------------------------
// Prophet benchmark

namespace {

// Best feasible subset of the arrived days.
double best_feasible(const SpiInstance& inst, const std::vector<int>& days,
                     const std::vector<int>& elements) {
  const int a = static_cast<int>(days.size());
  double best = 0.0;
  Bitset day_set(inst.n_days());
  Bitset chosen(inst.universe());
  for (std::uint64_t s = 1; s < (1ull << a); ++s) {
    day_set.clear();
    chosen.clear();
    for (int j = 0; j < a; ++j) {
      if ((s >> j) & 1) {
        day_set.set(days[j]);
        chosen.set(elements[j]);
      }
    }
    if (!inst.day_family.is_independent(day_set)) continue;
    best = std::max(best, inst.objective(chosen));
  }
  return best;
}

}  // namespace

double prophet_opt_exact(const SpiInstance& inst) {
  const int nd = inst.n_days();
  require(nd <= 20, Errc::instance_too_large,
          "exact benchmark needs at most 20 days");
  double tuples = 1.0;
  for (const auto& day : inst.days) {
    tuples *= static_cast<double>(day.support.size()) + 1.0;
    require(tuples <= 1e5, Errc::instance_too_large,
            "exact benchmark caps arrival tuples at 1e5");
  }
  std::vector<int> choice(nd, 0);  // support index, == size means no arrival
  double total = 0.0;
  std::vector<int> days, elements;
  while (true) {
    double pr = 1.0;
    days.clear();
    elements.clear();
    for (int i = 0; i < nd; ++i) {
      const Day& day = inst.days[i];
      const int c = choice[i];
      if (c < static_cast<int>(day.support.size())) {
        pr *= day.probs[c];
        days.push_back(i);
        elements.push_back(day.support[c]);
      } else {
        double rest = 1.0;
        for (double q : day.probs) rest -= q;
        pr *= std::max(0.0, rest);
      }
      if (pr <= 0.0) break;
    }
    if (pr > 0.0 && !days.empty())
      total += pr * best_feasible(inst, days, elements);
    int i = 0;
    for (; i < nd; ++i) {
      if (++choice[i] <= static_cast<int>(inst.days[i].support.size())) break;
      choice[i] = 0;
    }
    if (i == nd) break;
  }
  return total;
}

McEstimate prophet_opt_mc(const SpiInstance& inst, long trials,
                          std::uint64_t seed) {
  require(trials > 0, Errc::invalid_argument, "trials must be positive");
  require(inst.n_days() <= 30, Errc::instance_too_large,
          "sampled benchmark needs at most 30 days");
  const int nd = inst.n_days();
  double sum = 0.0, sumsq = 0.0;
  std::vector<int> days, elements;
  for (long t = 0; t < trials; ++t) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t));
    days.clear();
    elements.clear();
    for (int i = 0; i < nd; ++i) {
      double u = rng.uniform();
      for (size_t j = 0; j < inst.days[i].probs.size(); ++j) {
        if (u < inst.days[i].probs[j]) {
          days.push_back(i);
          elements.push_back(inst.days[i].support[j]);
          break;
        }
        u -= inst.days[i].probs[j];
      }
    }
    const double v = days.empty() ? 0.0 : best_feasible(inst, days, elements);
    sum += v;
    sumsq += v * v;
  }
  McEstimate est;
  est.estimate = sum / trials;
  const double var =
      std::max(0.0, sumsq / trials - est.estimate * est.estimate);
  est.std_error = std::sqrt(var / trials);
  return est;
}

// ---------------------------------------------------------------------------
// Experiment

namespace {

BoundSpec bound_spec_for(const ConstraintFamily& days, bool monotone) {
  BoundSpec spec;
  spec.monotone = monotone;
  switch (days.kind()) {
    case ConstraintKind::uniform:
      spec.constraint = BoundConstraint::uniform_k;
      spec.k = days.uniform_k();
      break;
    case ConstraintKind::matching:
      spec.constraint = BoundConstraint::matching;
      break;
    case ConstraintKind::knapsack:
      spec.constraint = BoundConstraint::knapsack;
      break;
    default:
      spec.constraint = BoundConstraint::matroid;
      break;
  }
  return spec;
}

}  // namespace

ExperimentReport run_experiment(const SpiInstance& inst,
                                const ExperimentConfig& cfg) {
  require(cfg.reps > 0, Errc::invalid_argument, "reps must be positive");
  const bool monotone_algo = cfg.algo == Algo::monotone;
  if (monotone_algo)
    require(inst.objective.is_monotone(), Errc::not_monotone,
            "the monotone algorithm needs a monotone objective");

  ExperimentReport rep;
  rep.epsilon = cfg.epsilon;
  rep.algo = algo_name(cfg.algo);
  rep.adversary = adversary_name(cfg.adversary);
  rep.reps = cfg.reps;
  rep.seed = cfg.seed;
  rep.universe = inst.universe();

  const BoundSpec spec = bound_spec_for(inst.day_family, monotone_algo);
  SolverConfig solver = cfg.solver;
  if (cfg.auto_b) solver.b = optimize_ratio(spec).b_star;
  rep.b = solver.b;
  rep.mode = solve_mode_name(solver.mode);

  SpiInstance reduced = reduce_small_probabilities(inst, cfg.epsilon);
  rep.reduced_universe = reduced.universe();

  FractionalResult frac = fractional_solution(reduced, solver);
  rep.fractional_value = frac.value;
  rep.trace = std::move(frac.trace);
  rep.gamma = day_gamma(frac.z, reduced.blowup);
  rep.gamma_floor = std::exp(-solver.b) - cfg.epsilon;

  const std::vector<double> y = day_marginals(reduced, frac.z);
  GreedyOcrs scheme(reduced.day_family, solver.b, y, cfg.seed);
  DaySampler sampler(reduced, frac.z);

  RoundingConfig rc;
  rc.algo = cfg.algo;
  rc.adversary = cfg.adversary;
  rc.order = cfg.order;
  rc.b = solver.b;
  rc.seed = cfg.seed;

  double sum = 0.0, sumsq = 0.0;
  for (long t = 0; t < cfg.reps; ++t) {
    RoundingTranscript tr =
        round_once(reduced, sampler, scheme, rc, static_cast<std::uint64_t>(t));
    sum += tr.value;
    sumsq += tr.value * tr.value;
    if (t < cfg.record_transcripts) rep.transcripts.push_back(std::move(tr));
  }
  rep.empirical_mean = sum / cfg.reps;
  const double var =
      std::max(0.0, sumsq / cfg.reps - rep.empirical_mean * rep.empirical_mean);
  rep.std_error = std::sqrt(var / cfg.reps);

  try {
    rep.opt = prophet_opt_exact(inst);
    rep.opt_method = "exact";
  } catch (const Error& e) {
    if (e.code() != Errc::instance_too_large) throw;
    rep.opt = prophet_opt_mc(inst, cfg.opt_mc_trials, cfg.seed ^ 0x5bf03635ull)
                  .estimate;
    rep.opt_method = "mc";
  }

  rep.c_formula = selectability_formula(spec, solver.b);
  if (cfg.selectability_trials > 0) {
    const auto sel = estimate_selectability(reduced.day_family, solver.b, y,
                                            cfg.selectability_trials,
                                            cfg.seed ^ 0x9e3779b9ull);
    double cmin = 1.0;
    for (const auto& s : sel) cmin = std::min(cmin, s.estimate);
    rep.c_emp = cmin;
  }

  const double eb = std::exp(-solver.b);
  double factor;
  if (monotone_algo) {
    factor = rep.c_formula * std::max(0.0, eb - cfg.epsilon) * (1.0 - eb);
  } else {
    factor = rep.c_formula / 4.0 * std::max(0.0, eb - cfg.epsilon) *
             std::max(0.0, 1.0 - eb - cfg.epsilon);
  }
  rep.bound_factor = factor;
  rep.bound_value = factor * rep.opt;
  rep.pass = rep.empirical_mean >= rep.bound_value - 3.0 * rep.std_error;
  return rep;
}

}  // namespace spi
