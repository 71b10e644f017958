#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rankcontest/model.hpp"

namespace rankcontest {

enum class TieBreak { ById, Random };

struct TieBreakPolicy {
  TieBreak kind = TieBreak::ById;
  std::uint64_t seed = 0;  // used only for TieBreak::Random

  bool operator==(const TieBreakPolicy&) const = default;
};

struct AgentOutcome {
  int agent_id = 0;
  int group = 0;
  double skill = 0.0;
  double env = 0.0;
  double w = 0.0;        // effective skill
  int slot = 0;          // 1..n, ascending score
  double theta = 0.0;    // (slot - 0.5) / n
  double lambda = 0.0;   // reward at slot
  double cum = 0.0;      // cumulative incentive mass K
  double score = 0.0;    // chosen effort x = K^(1/gamma)
  double cost = 0.0;     // K / w
  double utility = 0.0;  // lambda - cost
};

struct EquilibriumOutcome {
  std::vector<AgentOutcome> rows;  // slot order: rows[k].slot == k + 1
  double schedule_budget = 0.0;
  double cost_gamma = 1.0;
  std::optional<double> verified_regret;  // mean oracle regret, set by max_regret

  int size() const { return static_cast<int>(rows.size()); }
  const AgentOutcome& by_slot(int slot) const { return rows[slot - 1]; }
  const AgentOutcome& by_agent(int agent_id) const;

  std::vector<int> row_of_agent;  // agent id -> index into rows
};

// Rank-preserving equilibrium profile. Agents are ordered ascending by
// effective skill w (ties per policy) and assigned slots 1..n; the
// cumulative incentive mass follows the Stieltjes recursion
//   K_1 = 0,  K_i = K_{i-1} + w_(i) * (lambda_i - lambda_{i-1}),
// with score x_i = K_i^(1/gamma) and utility lambda_i - K_i / w_(i).
EquilibriumOutcome solve_equilibrium(const Population& pop,
                                     const RewardSchedule& sched,
                                     const CostModel& cost,
                                     TieBreakPolicy tie_break = {});

struct BestResponseResult {
  double score = 0.0;
  double utility = 0.0;
};

// Brute-force deviation oracle. Candidate scores are 0 and every rival
// score plus overtake_eps; the deviation slot counts rivals at or below
// the candidate. Ties in utility resolve to the smaller score.
BestResponseResult best_response(const Population& pop,
                                 const EquilibriumOutcome& outcome,
                                 int agent_id, double overtake_eps = 1e-9);

// Max over agents of best-response gain, floored at 0. Records the mean
// gain into outcome.verified_regret.
double max_regret(const Population& pop, EquilibriumOutcome& outcome,
                  double overtake_eps = 1e-9);

struct RankViolation {
  int agent_lo = 0;  // agent with the smaller w
  int agent_hi = 0;
  std::string what;
};

struct RankCheckResult {
  std::vector<RankViolation> violations;
  bool pass() const { return violations.empty(); }
};

// Pass iff w_i < w_j implies score_i <= score_j and slot_i < slot_j. Any
// slot order among agents with tied w is accepted.
RankCheckResult rank_preservation_check(const Population& pop,
                                        const EquilibriumOutcome& outcome);

}  // namespace rankcontest
