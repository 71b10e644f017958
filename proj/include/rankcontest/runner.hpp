#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "rankcontest/scenario.hpp"

namespace rankcontest {

enum class Command { Equilibrium, Sweep, Optimize, Fairness };

struct SweepArgs {
  std::string param = "r";  // r | tau | budget
  double from = 0.0;
  double to = 1.0;
  int steps = 21;
  std::string objective = "mixed";
};

struct OptimizeArgs {
  std::string objective = "mixed";  // school | welfare | planner | mixed
};

struct FairnessArgs {
  double delta = 0.1;
  std::string objective = "mixed";
};

struct RunArgs {
  Command command = Command::Equilibrium;
  SweepArgs sweep;
  OptimizeArgs optimize;
  FairnessArgs fairness;
  std::optional<std::uint64_t> seed_override;  // global --seed
  std::optional<int> precision_override;       // RANKCONTEST_PRECISION
};

// school=(1,0,0), welfare=(0,1,0), planner=(0,0,1), mixed=(1,1,1).
DesignerObjective objective_by_name(const std::string& name);

// Executes one command and writes its outputs into out_dir:
//   always            agents.csv (slot order), summary.json
//   sweep             sweep.csv
//   optimize/fairness optimize.csv / fairness.csv (search trace),
//                     schedule.csv, result.json
// For optimize/fairness the agents/summary files describe the winning
// schedule; otherwise the scenario's own reward family. Returns 0 on
// success, 1 on configuration errors, 2 on runtime failures; error text
// goes to err. Identical (config, command, seed) give byte-identical files.
int run_scenario(const ScenarioConfig& cfg, const RunArgs& args,
                 const std::string& out_dir, std::ostream& err);

}  // namespace rankcontest
