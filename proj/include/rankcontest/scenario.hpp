#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "rankcontest/design.hpp"
#include "rankcontest/equilibrium.hpp"
#include "rankcontest/model.hpp"

namespace rankcontest {

// Execution knobs shared by every command.
struct RunOptions {
  std::uint64_t seed = 0;
  TieBreak tie_break = TieBreak::ById;
  double overtake_eps = 1e-9;
  int precision = 9;  // significant digits in emitted floats

  bool operator==(const RunOptions&) const = default;
};

struct ScenarioConfig {
  PopulationSpec population;
  CostModel cost;
  RewardFamily reward;  // reward.n mirrors population.n
  RunOptions run;

  bool operator==(const ScenarioConfig&) const = default;
};

// Parse or validation failure. line() is 1-based, 0 when the problem is
// not tied to a single line (e.g. a missing required key).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg, int line = 0);
  int line() const { return line_; }

 private:
  int line_ = 0;
};

// Sectioned key=value scenario text:
//
//   [population]              n
//   [population.group.NAME]   fraction, skill, env, placement
//   [cost]                    gamma
//   [reward]                  family, budget, and the family's parameters
//   [run]                     seed, tie_break, overtake_eps, precision
//
// '#' starts a comment. skill accepts uniform(lo, hi), lognormal(mu, sigma)
// or grid(v1, v2, ...). Required keys: population.n, reward.family,
// reward.budget. Defaults: gamma=1, env=1, placement=quantile, seed=0,
// tie_break=id, overtake_eps=1e-9, precision=9; group fractions left
// unset share the mass not claimed explicitly; with no group section at
// all a single group "all" with skill uniform(0, 1) is assumed.
// Unknown sections or keys are errors naming the key and line.
ScenarioConfig parse_scenario(const std::string& text);

// Canonical text for a config; parse_scenario(serialize_scenario(c)) == c.
std::string serialize_scenario(const ScenarioConfig& cfg);

}  // namespace rankcontest
