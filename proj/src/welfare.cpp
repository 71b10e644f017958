#include "rankcontest/welfare.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rankcontest {

WelfareReport report(const Population& pop, const EquilibriumOutcome& outcome,
                     const RewardSchedule& sched) {
  const int n = outcome.size();
  if (pop.size() != n || sched.size() != n)
    throw std::invalid_argument("report: inconsistent inputs");

  WelfareReport rep;
  rep.budget = sched.budget;

  const auto g = pop.groups.size();
  std::vector<int> count(g, 0);
  std::vector<double> sum_lambda(g, 0.0), sum_utility(g, 0.0);

  for (const AgentOutcome& row : outcome.rows) {
    rep.applicant_welfare += row.utility;
    rep.school_total += row.lambda * row.score;
    rep.planner += row.score;
    rep.total_cost += row.cost;
    count[row.group] += 1;
    sum_lambda[row.group] += row.lambda;
    sum_utility[row.group] += row.utility;
  }
  rep.applicant_welfare /= n;
  rep.school_total /= n;
  rep.planner /= n;
  rep.total_cost /= n;
  rep.school_per_seat = rep.budget == 0.0 ? 0.0 : rep.school_total / rep.budget;

  for (std::size_t k = 0; k < g; ++k) {
    if (count[k] == 0) continue;
    rep.access.emplace_back(static_cast<int>(k), sum_lambda[k] / count[k]);
    rep.group_welfare.emplace_back(static_cast<int>(k), sum_utility[k] / count[k]);
  }
  auto span = [](const std::vector<std::pair<int, double>>& table) {
    double lo = table.front().second, hi = table.front().second;
    for (const auto& [id, v] : table) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return hi - lo;
  };
  if (!rep.access.empty()) {
    rep.access_gap = span(rep.access);
    rep.welfare_gap = span(rep.group_welfare);
  }
  return rep;
}

double designer_value(const WelfareReport& rep, const DesignerObjective& obj) {
  if (!(std::isfinite(obj.weight_school) && std::isfinite(obj.weight_welfare) &&
        std::isfinite(obj.weight_planner)))
    throw std::invalid_argument("designer_value: weights must be finite");
  if (obj.weight_school == 0.0 && obj.weight_welfare == 0.0 &&
      obj.weight_planner == 0.0)
    throw std::invalid_argument("designer_value: at least one weight nonzero");
  return obj.weight_school * rep.school_total +
         obj.weight_welfare * rep.applicant_welfare +
         obj.weight_planner * rep.planner;
}

}  // namespace rankcontest
