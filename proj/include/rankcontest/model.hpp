#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rankcontest {

// One applicant. Latent skill and environment multiplier combine
// multiplicatively into the effective skill w = skill * env, the single
// index that governs cost efficiency and the equilibrium order.
struct Agent {
  int id = 0;
  int group = 0;
  double skill = 1.0;
  double env = 1.0;

  bool operator==(const Agent&) const = default;
};

double effective_skill(const Agent& a);

struct GroupInfo {
  std::string label;
  double fraction = 1.0;

  bool operator==(const GroupInfo&) const = default;
};

struct Population {
  std::vector<Agent> agents;       // ids contiguous 0..n-1
  std::vector<GroupInfo> groups;   // index = group id

  int size() const { return static_cast<int>(agents.size()); }
};

// Convex effort-cost family: disutility(e, w) = e^gamma / w, gamma >= 1.
struct CostModel {
  double gamma = 1.0;

  double disutility(double effort, double w) const;
  // Effort whose cost numerator equals cum:
  // disutility(effort_for(cum), w) * w == cum.
  double effort_for(double cum) const;

  bool operator==(const CostModel&) const = default;
};

// Slot-indexed admission probabilities. Slot 1 = lowest rank; values are
// monotone nondecreasing, in [0, 1], with mean equal to the budget.
struct RewardSchedule {
  std::vector<double> values;  // lambda_1 .. lambda_n
  double budget = 0.0;

  int size() const { return static_cast<int>(values.size()); }
  // Slot quantile theta_i = (i - 0.5) / n for 1-based slot i.
  double theta(int slot) const {
    return (static_cast<double>(slot) - 0.5) / static_cast<double>(size());
  }

  bool operator==(const RewardSchedule&) const = default;
};

struct ScheduleViolation {
  enum class Kind { Range, Monotonicity, Budget };
  Kind kind;
  int slot = 0;            // 1-based; 0 for budget violations
  double magnitude = 0.0;  // how far out of bounds
  double observed = 0.0;   // offending slot value, or the schedule mean

  std::string describe() const;
};

struct ScheduleReport {
  std::vector<ScheduleViolation> violations;

  bool ok() const { return violations.empty(); }
  std::string describe() const;
};

ScheduleReport validate_schedule(const RewardSchedule& s);

struct DesignerObjective {
  double weight_school = 0.0;
  double weight_welfare = 0.0;
  double weight_planner = 0.0;
  std::optional<double> fairness_delta;  // max tolerated access gap

  bool operator==(const DesignerObjective&) const = default;
};

struct SkillDistribution {
  enum class Kind { Uniform, Lognormal, Grid };
  Kind kind = Kind::Uniform;
  double a = 0.0;             // uniform lo / lognormal mu
  double b = 1.0;             // uniform hi / lognormal sigma
  std::vector<double> grid;   // sorted, for Kind::Grid

  static SkillDistribution uniform(double lo, double hi);
  static SkillDistribution lognormal(double mu, double sigma);
  static SkillDistribution explicit_grid(std::vector<double> values);

  // Inverse CDF at q in (0, 1). Grid uses the empirical quantile of the
  // given values.
  double quantile(double q) const;

  bool operator==(const SkillDistribution&) const = default;
};

enum class Placement { Quantile, Sample };

struct GroupSpec {
  std::string label;
  double fraction = 1.0;
  SkillDistribution skill_dist;
  double env = 1.0;
  Placement placement = Placement::Quantile;

  bool operator==(const GroupSpec&) const = default;
};

struct PopulationSpec {
  int n = 0;
  std::vector<GroupSpec> groups;

  bool operator==(const PopulationSpec&) const = default;
};

// Group sizes by round(fraction*n) with largest-remainder correction.
std::vector<int> group_sizes(const PopulationSpec& spec);

// Deterministic population construction. Quantile placement puts skills at
// the (i - 0.5)/n_g quantiles of the group's distribution; sample placement
// draws them from the seeded stream.
Population make_population(const PopulationSpec& spec, std::uint64_t seed);

}  // namespace rankcontest
