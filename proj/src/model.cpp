#include "rankcontest/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rankcontest/stats.hpp"

namespace rankcontest {

namespace {

constexpr double kFractionTol = 1e-9;
constexpr double kBudgetTol = 1e-9;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

double effective_skill(const Agent& a) {
  require(a.skill > 0.0 && a.env > 0.0,
          "effective_skill: skill and env must be positive");
  return a.skill * a.env;
}

double CostModel::disutility(double effort, double w) const {
  require(gamma >= 1.0, "disutility: cost exponent gamma must be at least 1");
  require(w > 0.0, "disutility: w must be positive");
  require(effort >= 0.0, "disutility: effort must be nonnegative");
  return std::pow(effort, gamma) / w;
}

double CostModel::effort_for(double cum) const {
  require(gamma >= 1.0, "effort_for: cost exponent gamma must be at least 1");
  require(cum >= 0.0, "effort_for: cum must be nonnegative");
  return std::pow(cum, 1.0 / gamma);
}

std::string ScheduleViolation::describe() const {
  switch (kind) {
    case Kind::Range:
      return "slot " + std::to_string(slot) + " value " +
             std::to_string(observed) + " outside [0,1] by " +
             std::to_string(magnitude);
    case Kind::Monotonicity:
      return "monotonicity violated at slot " + std::to_string(slot) +
             " (decrease " + std::to_string(magnitude) + ")";
    case Kind::Budget:
      return "schedule mean " + std::to_string(observed) +
             " deviates from budget by " + std::to_string(magnitude);
  }
  return "unknown violation";
}

std::string ScheduleReport::describe() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.describe();
  }
  return out.empty() ? "ok" : out;
}

ScheduleReport validate_schedule(const RewardSchedule& s) {
  ScheduleReport rep;
  const int n = s.size();
  if (n == 0) {
    rep.violations.push_back(
        {ScheduleViolation::Kind::Budget, 0, s.budget, 0.0});
    return rep;
  }
  for (int i = 0; i < n; ++i) {
    double v = s.values[i];
    if (!(v >= 0.0 && v <= 1.0) || std::isnan(v)) {
      double mag = std::isnan(v) ? std::numeric_limits<double>::quiet_NaN()
                                 : (v < 0.0 ? -v : v - 1.0);
      rep.violations.push_back(
          {ScheduleViolation::Kind::Range, i + 1, mag, v});
    }
  }
  for (int i = 1; i < n; ++i) {
    if (s.values[i] < s.values[i - 1]) {
      rep.violations.push_back({ScheduleViolation::Kind::Monotonicity, i + 1,
                                s.values[i - 1] - s.values[i], s.values[i]});
    }
  }
  double mean = std::accumulate(s.values.begin(), s.values.end(), 0.0) / n;
  if (std::abs(mean - s.budget) > kBudgetTol) {
    rep.violations.push_back({ScheduleViolation::Kind::Budget, 0,
                              std::abs(mean - s.budget), mean});
  }
  return rep;
}

SkillDistribution SkillDistribution::uniform(double lo, double hi) {
  require(lo >= 0.0 && hi > lo, "uniform skill distribution requires 0 <= lo < hi");
  SkillDistribution d;
  d.kind = Kind::Uniform;
  d.a = lo;
  d.b = hi;
  return d;
}

SkillDistribution SkillDistribution::lognormal(double mu, double sigma) {
  require(std::isfinite(mu) && sigma > 0.0,
          "lognormal skill distribution requires finite mu and sigma > 0");
  SkillDistribution d;
  d.kind = Kind::Lognormal;
  d.a = mu;
  d.b = sigma;
  return d;
}

SkillDistribution SkillDistribution::explicit_grid(std::vector<double> values) {
  require(!values.empty(), "grid skill distribution requires at least one value");
  for (double v : values) require(v > 0.0, "grid skill values must be positive");
  SkillDistribution d;
  d.kind = Kind::Grid;
  d.grid = std::move(values);
  std::sort(d.grid.begin(), d.grid.end());
  return d;
}

double SkillDistribution::quantile(double q) const {
  require(q > 0.0 && q < 1.0, "skill quantile requires q in (0, 1)");
  switch (kind) {
    case Kind::Uniform:
      return a + (b - a) * q;
    case Kind::Lognormal:
      return std::exp(a + b * norm_quantile(q));
    case Kind::Grid: {
      auto idx = static_cast<std::size_t>(q * static_cast<double>(grid.size()));
      if (idx >= grid.size()) idx = grid.size() - 1;
      return grid[idx];
    }
  }
  throw std::logic_error("unreachable skill distribution kind");
}

std::vector<int> group_sizes(const PopulationSpec& spec) {
  const int n = spec.n;
  const auto g = spec.groups.size();
  std::vector<int> sizes(g, 0);
  std::vector<std::pair<double, std::size_t>> remainders;  // (-rem, index)
  int assigned = 0;
  for (std::size_t i = 0; i < g; ++i) {
    double exact = spec.groups[i].fraction * n;
    int base = static_cast<int>(std::floor(exact));
    sizes[i] = base;
    assigned += base;
    remainders.emplace_back(-(exact - base), i);
  }
  // Ties in remainder go to the earlier group.
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  for (int k = 0; k < n - assigned; ++k) sizes[remainders[k].second] += 1;
  return sizes;
}

Population make_population(const PopulationSpec& spec, std::uint64_t seed) {
  require(spec.n >= 2, "make_population: n must be at least 2");
  require(!spec.groups.empty(), "make_population: at least one group required");
  double frac_sum = 0.0;
  for (const auto& gs : spec.groups) {
    require(gs.fraction > 0.0, "make_population: group fractions must be positive");
    require(gs.env > 0.0, "make_population: env multiplier must be positive");
    frac_sum += gs.fraction;
  }
  require(std::abs(frac_sum - 1.0) <= kFractionTol,
          "make_population: group fractions must sum to 1");

  const std::vector<int> sizes = group_sizes(spec);
  Population pop;
  pop.groups.reserve(spec.groups.size());
  pop.agents.reserve(spec.n);
  UniformRng rng(seed);

  int next_id = 0;
  for (std::size_t g = 0; g < spec.groups.size(); ++g) {
    const GroupSpec& gs = spec.groups[g];
    pop.groups.push_back({gs.label, gs.fraction});
    const int ng = sizes[g];
    for (int i = 0; i < ng; ++i) {
      double q = gs.placement == Placement::Quantile
                     ? (i + 0.5) / static_cast<double>(ng)
                     : rng.next_open01();
      Agent a;
      a.id = next_id++;
      a.group = static_cast<int>(g);
      a.skill = gs.skill_dist.quantile(q);
      a.env = gs.env;
      pop.agents.push_back(a);
    }
  }
  return pop;
}

}  // namespace rankcontest
