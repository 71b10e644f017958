#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rankcontest/equilibrium.hpp"
#include "rankcontest/model.hpp"
#include "rankcontest/welfare.hpp"

namespace rankcontest {

// Parametric reward-schedule families over n slots with mean budget C.
//   top_k              deterministic admission of the top C fraction
//   lottery            constant probability C at every slot
//   threshold_lottery  probability C/(1-tau) above the quantile tau, 0 below
//   randomized_top_k   (1-r) * top_k + r * lottery
//   tiered             piecewise-constant probabilities over quantile tiers
//   explicit           caller-provided slot values
// Step families discretize by interval averaging, so boundary slots are
// fractional and the budget is exact.
struct RewardFamily {
  enum class Kind { TopK, Lottery, ThresholdLottery, RandomizedTopK, Tiered, Explicit };

  Kind kind = Kind::Lottery;
  int n = 0;
  double budget = 0.0;
  double tau = 0.0;                // threshold_lottery
  double mix = 0.0;                // randomized_top_k r
  std::vector<double> cuts;        // tiered: ascending quantile cut points
  std::vector<double> probs;       // tiered: per-tier probabilities, size cuts+1
  std::vector<double> values;      // explicit

  bool operator==(const RewardFamily&) const = default;
};

std::string family_kind_name(RewardFamily::Kind kind);

RewardSchedule instantiate(const RewardFamily& fam);

// Least-squares monotone sequence (pool-adjacent-violators).
std::vector<double> pool_adjacent_violators(std::span<const double> raw);

// Nearest feasible schedule: PAV, clip to [0,1], then an additive shift
// found by bisection so the mean equals budget. Idempotent on feasible
// inputs.
RewardSchedule project_feasible(std::span<const double> raw, double budget);

// Population plus everything needed to evaluate one schedule.
struct ContestSetup {
  Population population;
  CostModel cost;
  TieBreakPolicy tie_break;
};

struct SweepRow {
  double param = 0.0;
  std::optional<WelfareReport> report;  // empty when instantiation failed
  double designer = 0.0;
  std::string error;
};

struct SweepResult {
  std::string param_name;
  std::vector<SweepRow> rows;
};

// One equilibrium + report per grid value of the named parameter
// ("r", "tau", or "budget"). Instantiation errors are recorded per row.
SweepResult sweep(const RewardFamily& base, const std::string& param,
                  std::span<const double> grid, const ContestSetup& setup,
                  const DesignerObjective& obj);

struct SearchTraceRow {
  std::string phase;           // grid | refine | sample | ascent | fallback
  std::vector<double> params;
  double designer = 0.0;
  double access_gap = 0.0;
  bool feasible = true;
};

struct OptimizeResult {
  std::vector<std::string> param_names;
  std::vector<double> params;
  RewardSchedule schedule;
  double value = 0.0;
  WelfareReport report;
  double achieved_gap = 0.0;
  bool fallback_lottery = false;  // fairness constraint forced the lottery
  std::vector<SearchTraceRow> trace;
};

// Derivative-free schedule search: 201-point grid plus golden-section
// refinement for one-parameter families, seeded random search plus
// coordinate ascent for tiered (single cut) and explicit families.
OptimizeResult optimize(const DesignerObjective& obj, const RewardFamily& fam,
                        const ContestSetup& setup, std::uint64_t seed = 0);

// optimize restricted to schedules with access_gap <= delta. The lottery
// (gap 0) is the declared fallback when nothing else qualifies.
OptimizeResult fairness_optimize(const DesignerObjective& obj, double delta,
                                 const RewardFamily& fam,
                                 const ContestSetup& setup,
                                 std::uint64_t seed = 0);

}  // namespace rankcontest
