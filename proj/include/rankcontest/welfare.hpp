#pragma once

#include <utility>
#include <vector>

#include "rankcontest/equilibrium.hpp"
#include "rankcontest/model.hpp"

namespace rankcontest {

// Stakeholder metrics over an equilibrium outcome. Groups that received no
// agents are omitted from the access and welfare tables.
struct WelfareReport {
  double budget = 0.0;
  double applicant_welfare = 0.0;  // mean utility
  double school_total = 0.0;       // (1/n) sum lambda * score
  double school_per_seat = 0.0;    // school_total / budget, 0 when budget = 0
  double planner = 0.0;            // mean score
  double total_cost = 0.0;         // mean disutility
  double access_gap = 0.0;         // max - min group access
  double welfare_gap = 0.0;        // max - min group mean utility
  std::vector<std::pair<int, double>> access;         // group id -> mean lambda
  std::vector<std::pair<int, double>> group_welfare;  // group id -> mean utility
};

WelfareReport report(const Population& pop, const EquilibriumOutcome& outcome,
                     const RewardSchedule& sched);

// weight_school * school_total + weight_welfare * applicant_welfare +
// weight_planner * planner.
double designer_value(const WelfareReport& rep, const DesignerObjective& obj);

}  // namespace rankcontest
