#include "rankcontest/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rankcontest/stats.hpp"

namespace rankcontest {

const AgentOutcome& EquilibriumOutcome::by_agent(int agent_id) const {
  if (agent_id < 0 || agent_id >= size())
    throw std::invalid_argument("unknown agent id " + std::to_string(agent_id));
  return rows[row_of_agent[agent_id]];
}

EquilibriumOutcome solve_equilibrium(const Population& pop,
                                     const RewardSchedule& sched,
                                     const CostModel& cost,
                                     TieBreakPolicy tie_break) {
  const int n = pop.size();
  if (sched.size() != n)
    throw std::invalid_argument("solve_equilibrium: population size " +
                                std::to_string(n) + " != schedule size " +
                                std::to_string(sched.size()));
  if (auto rep = validate_schedule(sched); !rep.ok())
    throw std::invalid_argument("solve_equilibrium: invalid schedule: " +
                                rep.describe());

  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = effective_skill(pop.agents[i]);

  std::vector<std::uint64_t> tie_key(n, 0);
  if (tie_break.kind == TieBreak::Random) {
    UniformRng rng(tie_break.seed);
    for (int i = 0; i < n; ++i) tie_key[i] = rng.next_u64();
  }

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (w[a] != w[b]) return w[a] < w[b];
    if (tie_key[a] != tie_key[b]) return tie_key[a] < tie_key[b];
    return a < b;
  });

  EquilibriumOutcome out;
  out.schedule_budget = sched.budget;
  out.cost_gamma = cost.gamma;
  out.rows.resize(n);
  out.row_of_agent.assign(n, 0);

  double cum = 0.0;
  for (int k = 0; k < n; ++k) {
    const int id = order[k];
    const Agent& a = pop.agents[id];
    if (k > 0) cum += w[id] * (sched.values[k] - sched.values[k - 1]);

    AgentOutcome& row = out.rows[k];
    row.agent_id = id;
    row.group = a.group;
    row.skill = a.skill;
    row.env = a.env;
    row.w = w[id];
    row.slot = k + 1;
    row.theta = sched.theta(k + 1);
    row.lambda = sched.values[k];
    row.cum = cum;
    row.score = cost.effort_for(cum);
    row.cost = cum / w[id];
    row.utility = row.lambda - row.cost;
    out.row_of_agent[id] = k;
  }
  return out;
}

BestResponseResult best_response(const Population& pop,
                                 const EquilibriumOutcome& outcome,
                                 int agent_id, double overtake_eps) {
  const int n = outcome.size();
  if (agent_id < 0 || agent_id >= n || pop.size() != n)
    throw std::invalid_argument("best_response: unknown agent id " +
                                std::to_string(agent_id));
  if (!(overtake_eps > 0.0))
    throw std::invalid_argument("best_response: overtake_eps must be positive");

  const AgentOutcome& self = outcome.by_agent(agent_id);
  const double gamma = outcome.cost_gamma;

  std::vector<double> rivals;
  rivals.reserve(n - 1);
  for (const AgentOutcome& r : outcome.rows)
    if (r.agent_id != agent_id) rivals.push_back(r.score);
  std::sort(rivals.begin(), rivals.end());

  auto eval = [&](double y) {
    auto beaten = std::upper_bound(rivals.begin(), rivals.end(), y) -
                  rivals.begin();
    int slot = 1 + static_cast<int>(beaten);
    double reward = outcome.by_slot(slot).lambda;
    return reward - std::pow(y, gamma) / self.w;
  };

  BestResponseResult best{0.0, eval(0.0)};
  double prev = -1.0;
  for (double x : rivals) {
    if (x == prev) continue;  // duplicate rival scores give the same candidate
    prev = x;
    double y = x + overtake_eps;
    double u = eval(y);
    if (u > best.utility) best = {y, u};
  }
  return best;
}

double max_regret(const Population& pop, EquilibriumOutcome& outcome,
                  double overtake_eps) {
  double worst = 0.0;
  double total = 0.0;
  for (const AgentOutcome& row : outcome.rows) {
    BestResponseResult br =
        best_response(pop, outcome, row.agent_id, overtake_eps);
    double regret = std::max(0.0, br.utility - row.utility);
    worst = std::max(worst, regret);
    total += regret;
  }
  outcome.verified_regret = outcome.size() > 0 ? total / outcome.size() : 0.0;
  return worst;
}

RankCheckResult rank_preservation_check(const Population& pop,
                                        const EquilibriumOutcome& outcome) {
  RankCheckResult res;
  const int n = outcome.size();
  if (pop.size() != n)
    throw std::invalid_argument("rank_preservation_check: size mismatch");

  for (int a = 0; a < n; ++a) {
    const AgentOutcome& ra = outcome.by_agent(a);
    for (int b = a + 1; b < n; ++b) {
      const AgentOutcome& rb = outcome.by_agent(b);
      const AgentOutcome* lo = &ra;
      const AgentOutcome* hi = &rb;
      if (ra.w == rb.w) continue;  // any slot order among tied w is fine
      if (ra.w > rb.w) std::swap(lo, hi);
      if (lo->score > hi->score) {
        res.violations.push_back(
            {lo->agent_id, hi->agent_id,
             "score order broken: w " + std::to_string(lo->w) + " scores " +
                 std::to_string(lo->score) + " > " + std::to_string(hi->score)});
      }
      if (lo->slot >= hi->slot) {
        res.violations.push_back(
            {lo->agent_id, hi->agent_id,
             "slot order broken: w " + std::to_string(lo->w) + " holds slot " +
                 std::to_string(lo->slot) + " >= " + std::to_string(hi->slot)});
      }
    }
  }
  return res;
}

}  // namespace rankcontest
