#include "rankcontest/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rankcontest/stats.hpp"

namespace rankcontest {

namespace {

constexpr double kBudgetTol = 1e-9;
constexpr double kGapSlack = 1e-12;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Interval-averaged discretization of a piecewise-constant quantile
// schedule. pieces = (upper cut, probability), ascending cuts ending at 1.
std::vector<double> discretize_steps(
    int n, const std::vector<std::pair<double, double>>& pieces) {
  std::vector<double> values(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    double acc = 0.0;
    double prev_cut = 0.0;
    for (const auto& [cut, prob] : pieces) {
      double overlap = std::min(hi, cut) - std::max(lo, prev_cut);
      if (overlap > 0.0) acc += prob * overlap;
      prev_cut = cut;
    }
    double v = std::clamp(acc * n, 0.0, 1.0);
    // Snap slots fully inside a tier back to the exact tier probability;
    // the quantile arithmetic above carries a few ulp of noise that would
    // otherwise break strict monotonicity between equal-valued slots.
    for (const auto& [cut, prob] : pieces) {
      if (std::abs(v - prob) <= 1e-12) {
        v = prob;
        break;
      }
    }
    values[i] = v;
  }
  return values;
}

WelfareReport evaluate_schedule(const RewardSchedule& sched,
                                const ContestSetup& setup) {
  EquilibriumOutcome outcome = solve_equilibrium(
      setup.population, sched, setup.cost, setup.tie_break);
  return report(setup.population, outcome, sched);
}

RewardFamily with_param(const RewardFamily& base, const std::string& name,
                        double value) {
  RewardFamily f = base;
  if (name == "budget") {
    f.budget = value;
  } else if (name == "r") {
    require(base.kind == RewardFamily::Kind::RandomizedTopK,
            "parameter 'r' applies to randomized_top_k only");
    f.mix = value;
  } else if (name == "tau") {
    require(base.kind == RewardFamily::Kind::ThresholdLottery,
            "parameter 'tau' applies to threshold_lottery only");
    f.tau = value;
  } else {
    throw std::invalid_argument("unknown sweep parameter '" + name + "'");
  }
  return f;
}

}  // namespace

std::string family_kind_name(RewardFamily::Kind kind) {
  switch (kind) {
    case RewardFamily::Kind::TopK: return "top_k";
    case RewardFamily::Kind::Lottery: return "lottery";
    case RewardFamily::Kind::ThresholdLottery: return "threshold_lottery";
    case RewardFamily::Kind::RandomizedTopK: return "randomized_top_k";
    case RewardFamily::Kind::Tiered: return "tiered";
    case RewardFamily::Kind::Explicit: return "explicit";
  }
  return "unknown";
}

RewardSchedule instantiate(const RewardFamily& fam) {
  require(fam.n >= 1, "instantiate: n must be positive");
  require(fam.budget >= 0.0 && fam.budget <= 1.0,
          "instantiate: budget outside [0,1]");
  const int n = fam.n;
  const double c = fam.budget;
  RewardSchedule sched;
  sched.budget = c;

  switch (fam.kind) {
    case RewardFamily::Kind::TopK:
      sched.values = discretize_steps(n, {{1.0 - c, 0.0}, {1.0, 1.0}});
      break;
    case RewardFamily::Kind::Lottery:
      sched.values.assign(n, c);
      break;
    case RewardFamily::Kind::ThresholdLottery: {
      require(fam.tau >= 0.0 && fam.tau <= 1.0 - c + 1e-12,
              "threshold_lottery: tau must lie in [0, 1 - budget]");
      double p = fam.tau >= 1.0 ? 0.0 : std::min(1.0, c / (1.0 - fam.tau));
      sched.values = discretize_steps(n, {{fam.tau, 0.0}, {1.0, p}});
      break;
    }
    case RewardFamily::Kind::RandomizedTopK: {
      require(fam.mix >= 0.0 && fam.mix <= 1.0,
              "randomized_top_k: r must lie in [0, 1]");
      auto top = discretize_steps(n, {{1.0 - c, 0.0}, {1.0, 1.0}});
      sched.values.resize(n);
      for (int i = 0; i < n; ++i)
        sched.values[i] = (1.0 - fam.mix) * top[i] + fam.mix * c;
      break;
    }
    case RewardFamily::Kind::Tiered: {
      require(fam.probs.size() == fam.cuts.size() + 1,
              "tiered: need one probability per tier (cuts + 1)");
      double prev = 0.0;
      for (double cut : fam.cuts) {
        require(cut > prev && cut < 1.0,
                "tiered: cuts must be strictly ascending within (0, 1)");
        prev = cut;
      }
      std::vector<std::pair<double, double>> pieces;
      double mean = 0.0;
      double prev_cut = 0.0;
      for (std::size_t t = 0; t < fam.probs.size(); ++t) {
        double p = fam.probs[t];
        require(p >= 0.0 && p <= 1.0, "tiered: probabilities must lie in [0, 1]");
        if (t > 0)
          require(p >= fam.probs[t - 1], "tiered: tier probs non-monotone");
        double cut = t < fam.cuts.size() ? fam.cuts[t] : 1.0;
        pieces.emplace_back(cut, p);
        mean += p * (cut - prev_cut);
        prev_cut = cut;
      }
      require(std::abs(mean - c) <= kBudgetTol,
              "tiered: tier probabilities imply mean " + std::to_string(mean) +
                  ", budget is " + std::to_string(c));
      sched.values = discretize_steps(n, pieces);
      break;
    }
    case RewardFamily::Kind::Explicit: {
      require(static_cast<int>(fam.values.size()) == n,
              "explicit: need exactly n slot values");
      sched.values = fam.values;
      if (auto rep = validate_schedule(sched); !rep.ok())
        throw std::invalid_argument("explicit: infeasible values: " +
                                    rep.describe());
      break;
    }
  }
  return sched;
}

std::vector<double> pool_adjacent_violators(std::span<const double> raw) {
  struct Block {
    double sum;
    int count;
  };
  std::vector<Block> blocks;
  blocks.reserve(raw.size());
  for (double v : raw) {
    blocks.push_back({v, 1});
    while (blocks.size() >= 2) {
      Block& b = blocks[blocks.size() - 1];
      Block& a = blocks[blocks.size() - 2];
      if (a.sum * b.count <= b.sum * a.count) break;
      a.sum += b.sum;
      a.count += b.count;
      blocks.pop_back();
    }
  }
  std::vector<double> out;
  out.reserve(raw.size());
  for (const Block& blk : blocks) {
    double mean = blk.sum / blk.count;
    out.insert(out.end(), blk.count, mean);
  }
  return out;
}

RewardSchedule project_feasible(std::span<const double> raw, double budget) {
  require(!raw.empty(), "project_feasible: empty input");
  require(budget >= 0.0 && budget <= 1.0,
          "project_feasible: infeasible budget outside [0,1]");
  for (double v : raw)
    require(std::isfinite(v), "project_feasible: values must be finite");

  const int n = static_cast<int>(raw.size());
  std::vector<double> y = pool_adjacent_violators(raw);
  const double tol = 1e-10;

  for (int round = 0; round < 100; ++round) {
    for (double& v : y) v = std::clamp(v, 0.0, 1.0);
    double mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
    if (std::abs(mean - budget) <= tol) return {std::move(y), budget};

    // Additive shift: mean(clip(y + t)) is continuous and nondecreasing
    // in t, so bisection brackets the required shift.
    double lo = -*std::max_element(y.begin(), y.end());
    double hi = 1.0 - *std::min_element(y.begin(), y.end());
    double t = 0.0;
    for (int it = 0; it < 200; ++it) {
      t = 0.5 * (lo + hi);
      double m = 0.0;
      for (double v : y) m += std::clamp(v + t, 0.0, 1.0);
      m /= n;
      if (std::abs(m - budget) <= 0.5 * tol) break;
      (m < budget ? lo : hi) = t;
    }
    for (double& v : y) v += t;
  }
  throw std::runtime_error(
      "project_feasible: no convergence after 100 rounds (budget " +
      std::to_string(budget) + ")");
}

SweepResult sweep(const RewardFamily& base, const std::string& param,
                  std::span<const double> grid, const ContestSetup& setup,
                  const DesignerObjective& obj) {
  require(!grid.empty(), "sweep: empty parameter grid");
  with_param(base, param, grid.front());  // fail fast on bad parameter names

  SweepResult res;
  res.param_name = param;
  res.rows.reserve(grid.size());
  for (double v : grid) {
    SweepRow row;
    row.param = v;
    try {
      RewardSchedule sched = instantiate(with_param(base, param, v));
      row.report = evaluate_schedule(sched, setup);
      row.designer = designer_value(*row.report, obj);
    } catch (const std::exception& e) {
      row.error = e.what();
      row.designer = std::numeric_limits<double>::quiet_NaN();
    }
    res.rows.push_back(std::move(row));
  }
  return res;
}

namespace {

// Shared search state for optimize / fairness_optimize.
class ScheduleSearch {
 public:
  ScheduleSearch(const DesignerObjective& obj, const ContestSetup& setup,
                 std::optional<double> delta, OptimizeResult& result)
      : obj_(obj), setup_(setup), delta_(delta), result_(result) {}

  bool found() const { return found_; }
  double best_value() const { return best_value_; }
  const std::vector<double>& best_params() const { return result_.params; }
  const RewardSchedule& best_schedule() const { return result_.schedule; }

  // Evaluates one candidate schedule, traces it, and keeps it when it is
  // feasible and strictly better than the incumbent.
  double consider(const std::string& phase, std::vector<double> params,
                  const RewardFamily& fam) {
    double value = -std::numeric_limits<double>::infinity();
    try {
      RewardSchedule sched = instantiate(fam);
      WelfareReport rep = evaluate_schedule(sched, setup_);
      value = designer_value(rep, obj_);
      bool feasible = !delta_ || rep.access_gap <= *delta_ + kGapSlack;
      result_.trace.push_back({phase, params, value, rep.access_gap, feasible});
      if (feasible && (!found_ || value > best_value_)) {
        found_ = true;
        best_value_ = value;
        result_.params = std::move(params);
        result_.schedule = std::move(sched);
        result_.report = std::move(rep);
      }
      if (!feasible) value = -std::numeric_limits<double>::infinity();
    } catch (const std::exception&) {
      result_.trace.push_back({phase, params, value, 0.0, false});
    }
    return value;
  }

 private:
  const DesignerObjective& obj_;
  const ContestSetup& setup_;
  std::optional<double> delta_;
  OptimizeResult& result_;
  bool found_ = false;
  double best_value_ = -std::numeric_limits<double>::infinity();
};

void search_one_param(ScheduleSearch& search, const RewardFamily& fam,
                      const std::string& name, double lo, double hi) {
  const int grid_points = 201;
  std::vector<double> grid(grid_points);
  for (int i = 0; i < grid_points; ++i)
    grid[i] = lo + (hi - lo) * i / (grid_points - 1);

  int best_idx = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_points; ++i) {
    double v = search.consider("grid", {grid[i]}, with_param(fam, name, grid[i]));
    if (v > best) {
      best = v;
      best_idx = i;
    }
  }

  // Golden-section refinement on the best cell. Values at infeasible or
  // failed points are -inf, so refinement can never displace the grid best.
  double a = grid[std::max(0, best_idx - 1)];
  double b = grid[std::min(grid_points - 1, best_idx + 1)];
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = search.consider("refine", {c}, with_param(fam, name, c));
  double fd = search.consider("refine", {d}, with_param(fam, name, d));
  for (int it = 0; it < 60; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = search.consider("refine", {c}, with_param(fam, name, c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = search.consider("refine", {d}, with_param(fam, name, d));
    }
  }
}

// Two-tier schedules parameterized by (cut, low probability); the upper
// probability is pinned by the budget.
RewardFamily two_tier(const RewardFamily& base, double cut, double p_low) {
  RewardFamily f = base;
  f.cuts = {cut};
  double p_high = (f.budget - p_low * cut) / (1.0 - cut);
  f.probs = {p_low, std::clamp(p_high, p_low, 1.0)};
  return f;
}

double two_tier_plow_min(double budget, double cut) {
  return std::max(0.0, (budget + cut - 1.0) / cut);
}

void search_two_tier(ScheduleSearch& search, const RewardFamily& fam,
                     std::uint64_t seed) {
  require(fam.cuts.size() == 1,
          "optimize: tiered search supports a single cut (two tiers)");
  const double c = fam.budget;
  UniformRng rng(seed);

  if (fam.probs.size() == 2)
    search.consider("sample", {fam.cuts[0], fam.probs[0]}, fam);
  const int samples = 300;
  for (int s = 0; s < samples; ++s) {
    double cut = rng.next(0.01, 0.99);
    double lo = two_tier_plow_min(c, cut);
    double p_low = rng.next(lo, c);
    search.consider("sample", {cut, p_low}, two_tier(fam, cut, p_low));
  }
  if (!search.found()) return;

  for (double step : {0.1, 0.03, 0.01, 0.003, 0.001}) {
    bool improved = true;
    while (improved) {
      improved = false;
      double cut0 = search.best_params()[0];
      double p0 = search.best_params()[1];
      for (double dcut : {-step, step}) {
        double cut = std::clamp(cut0 + dcut, 0.01, 0.99);
        double p = std::clamp(p0, two_tier_plow_min(c, cut), c);
        double prev = search.best_value();
        if (search.consider("ascent", {cut, p}, two_tier(fam, cut, p)) > prev)
          improved = true;
      }
      double cut1 = search.best_params()[0];
      for (double dp : {-step * c, step * c}) {
        double p = std::clamp(search.best_params()[1] + dp,
                              two_tier_plow_min(c, cut1), c);
        double prev = search.best_value();
        if (search.consider("ascent", {cut1, p}, two_tier(fam, cut1, p)) > prev)
          improved = true;
      }
    }
  }
}

void search_explicit(ScheduleSearch& search, const RewardFamily& fam,
                     std::uint64_t seed) {
  const int n = fam.n;
  const double c = fam.budget;
  UniformRng rng(seed);

  auto project_into = [&](const std::vector<double>& raw) {
    RewardFamily f = fam;
    f.values = project_feasible(raw, c).values;
    return f;
  };

  // Warm starts: the family extremes, then seeded random monotone draws.
  int sample_idx = 0;
  auto consider_raw = [&](const std::vector<double>& raw) {
    search.consider("sample", {static_cast<double>(sample_idx++)},
                    project_into(raw));
  };
  if (!fam.values.empty()) consider_raw(fam.values);
  RewardFamily top = fam;
  top.kind = RewardFamily::Kind::TopK;
  consider_raw(instantiate(top).values);
  consider_raw(std::vector<double>(n, c));
  for (double r : {0.25, 0.5, 0.75}) {
    RewardFamily mixed = fam;
    mixed.kind = RewardFamily::Kind::RandomizedTopK;
    mixed.mix = r;
    consider_raw(instantiate(mixed).values);
  }

  const int samples = 300;
  std::vector<double> raw(n);
  for (int s = 0; s < samples; ++s) {
    for (double& v : raw) v = rng.next(0.0, 1.0);
    consider_raw(raw);
  }
  if (!search.found()) return;

  // Coordinate ascent on slot values with re-projection.
  for (double step : {0.2, 0.05, 0.01}) {
    bool improved = true;
    int guard = 0;
    while (improved && guard++ < 8) {
      improved = false;
      for (int i = 0; i < n; ++i) {
        for (double dv : {step, -step}) {
          std::vector<double> cur = search.best_schedule().values;
          cur[i] = std::clamp(cur[i] + dv, 0.0, 1.0);
          double prev = search.best_value();
          if (search.consider("ascent", {static_cast<double>(i)},
                              project_into(cur)) > prev)
            improved = true;
        }
      }
    }
  }
}

OptimizeResult run_search(const DesignerObjective& obj, const RewardFamily& fam,
                          const ContestSetup& setup, std::uint64_t seed,
                          std::optional<double> delta) {
  if (delta) require(*delta >= 0.0, "fairness_optimize: delta must be >= 0");
  OptimizeResult result;
  ScheduleSearch search(obj, setup, delta, result);

  switch (fam.kind) {
    case RewardFamily::Kind::TopK:
    case RewardFamily::Kind::Lottery:
      search.consider("grid", {}, fam);
      break;
    case RewardFamily::Kind::RandomizedTopK:
      result.param_names = {"r"};
      search_one_param(search, fam, "r", 0.0, 1.0);
      break;
    case RewardFamily::Kind::ThresholdLottery:
      result.param_names = {"tau"};
      search_one_param(search, fam, "tau", 0.0, 1.0 - fam.budget);
      break;
    case RewardFamily::Kind::Tiered:
      result.param_names = {"cut", "p_low"};
      search_two_tier(search, fam, seed);
      break;
    case RewardFamily::Kind::Explicit:
      search_explicit(search, fam, seed);
      result.params.clear();  // the schedule itself is the answer
      break;
  }

  if (!search.found()) {
    if (!delta)
      throw std::runtime_error("optimize: no feasible schedule in family " +
                               family_kind_name(fam.kind));
    RewardFamily lottery = fam;
    lottery.kind = RewardFamily::Kind::Lottery;
    result.param_names.clear();
    result.fallback_lottery = true;
    search.consider("fallback", {}, lottery);
    if (!search.found())
      throw std::runtime_error(
          "fairness_optimize: even the lottery fallback failed to evaluate");
  }
  result.value = search.best_value();
  result.achieved_gap = result.report.access_gap;
  return result;
}

}  // namespace

OptimizeResult optimize(const DesignerObjective& obj, const RewardFamily& fam,
                        const ContestSetup& setup, std::uint64_t seed) {
  return run_search(obj, fam, setup, seed, std::nullopt);
}

OptimizeResult fairness_optimize(const DesignerObjective& obj, double delta,
                                 const RewardFamily& fam,
                                 const ContestSetup& setup,
                                 std::uint64_t seed) {
  return run_search(obj, fam, setup, seed, delta);
}

}  // namespace rankcontest
