#include <string>

#include "doctest.h"
#include "rankcontest/scenario.hpp"

using namespace rankcontest;

namespace {

const char* kMinimal = R"([population]
n = 6

[reward]
family = lottery
budget = 0.5
)";

const char* kTwoGroups = R"(# inline comments are stripped
[population]
n = 10

[population.group.A]
fraction = 0.6
skill = lognormal(0, 0.5)
placement = sample

[population.group.B]
skill = grid(0.5, 1.5)   # env handicap below
env = 0.4

[cost]
gamma = 2

[reward]
family = randomized_top_k
budget = 0.5
r = 0.3

[run]
seed = 42
tie_break = random
overtake_eps = 1e-08
precision = 12
)";

}  // namespace

TEST_CASE("minimal scenario fills every documented default") {
  ScenarioConfig cfg = parse_scenario(kMinimal);

  CHECK(cfg.population.n == 6);
  REQUIRE(cfg.population.groups.size() == 1);
  CHECK(cfg.population.groups[0].label == "all");
  CHECK(cfg.population.groups[0].fraction == 1.0);
  CHECK(cfg.population.groups[0].skill_dist ==
        SkillDistribution::uniform(0.0, 1.0));
  CHECK(cfg.population.groups[0].env == 1.0);
  CHECK(cfg.population.groups[0].placement == Placement::Quantile);

  CHECK(cfg.cost.gamma == 1.0);
  CHECK(cfg.reward.kind == RewardFamily::Kind::Lottery);
  CHECK(cfg.reward.n == 6);
  CHECK(cfg.reward.budget == 0.5);

  CHECK(cfg.run.seed == 0);
  CHECK(cfg.run.tie_break == TieBreak::ById);
  CHECK(cfg.run.overtake_eps == 1e-9);
  CHECK(cfg.run.precision == 9);
}

TEST_CASE("two-group scenario parses fully") {
  ScenarioConfig cfg = parse_scenario(kTwoGroups);

  CHECK(cfg.population.n == 10);
  REQUIRE(cfg.population.groups.size() == 2);
  const GroupSpec& a = cfg.population.groups[0];
  const GroupSpec& b = cfg.population.groups[1];
  CHECK(a.label == "A");
  CHECK(a.fraction == 0.6);
  CHECK(a.skill_dist == SkillDistribution::lognormal(0.0, 0.5));
  CHECK(a.env == 1.0);
  CHECK(a.placement == Placement::Sample);
  CHECK(b.label == "B");
  CHECK(b.fraction == doctest::Approx(0.4));  // remaining mass
  CHECK(b.skill_dist == SkillDistribution::explicit_grid({0.5, 1.5}));
  CHECK(b.env == 0.4);
  CHECK(b.placement == Placement::Quantile);

  CHECK(cfg.cost.gamma == 2.0);
  CHECK(cfg.reward.kind == RewardFamily::Kind::RandomizedTopK);
  CHECK(cfg.reward.mix == 0.3);
  CHECK(cfg.run.seed == 42);
  CHECK(cfg.run.tie_break == TieBreak::Random);
  CHECK(cfg.run.overtake_eps == 1e-8);
  CHECK(cfg.run.precision == 12);
}

TEST_CASE("unset fractions split the remaining mass equally") {
  ScenarioConfig cfg = parse_scenario(R"([population]
n = 9
[population.group.big]
fraction = 0.5
[population.group.x]
[population.group.y]
[reward]
family = top_k
budget = 0.3
)");
  REQUIRE(cfg.population.groups.size() == 3);
  CHECK(cfg.population.groups[0].fraction == 0.5);
  CHECK(cfg.population.groups[1].fraction == doctest::Approx(0.25));
  CHECK(cfg.population.groups[2].fraction == doctest::Approx(0.25));
}

TEST_CASE("typo in a section name points at the offending key and line") {
  const char* text = R"([population]
n = 4
[rewards]
family = top_k
budget = 0.5
)";
  try {
    parse_scenario(text);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("unknown key 'rewards.family'") !=
          std::string::npos);
    CHECK(e.line() == 4);
  }
}

TEST_CASE("parser rejects malformed scenarios with located errors") {
  auto line_of_error = [](const std::string& text) -> int {
    try {
      parse_scenario(text);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };

  // Duplicate key, second occurrence flagged, first referenced.
  const char* dup = "[population]\nn = 4\nn = 5\n";
  try {
    parse_scenario(dup);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    CHECK(msg.find("duplicate key 'population.n'") != std::string::npos);
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(e.line() == 3);
  }

  CHECK(line_of_error("[population]\nn = 1\n[reward]\nfamily = lottery\n"
                      "budget = 0.5\n") == 2);
  CHECK(line_of_error("[population]\nn = 4\n[reward]\nfamily = lottery\n"
                      "budget = 1.5\n") == 5);
  CHECK(line_of_error("[population]\nn = 4\n[reward]\nfamily = raffle\n"
                      "budget = 0.5\n") == 4);
  CHECK(line_of_error("[population]\nn = 4\n[population.group.team.blue]\n"
                      "[reward]\nfamily = lottery\nbudget = 0.5\n") == 3);
  CHECK(line_of_error("[population]\nn = 4\n"
                      "[population.group.A]\nskill = triangle(1, 2)\n"
                      "[reward]\nfamily = lottery\nbudget = 0.5\n") == 4);
  CHECK(line_of_error("[population]\nn = 4\n"
                      "[population.group.A]\nskill = uniform(2, 1)\n"
                      "[reward]\nfamily = lottery\nbudget = 0.5\n") == 4);
  CHECK(line_of_error("[population]\nn = 4\n[reward]\nfamily = lottery\n"
                      "budget = 0.5\n[run]\ntie_break = coin\n") == 7);
  CHECK(line_of_error("[population]\nn = 4\n"
                      "[population.group.A]\nplacement = scatter\n"
                      "[reward]\nfamily = lottery\nbudget = 0.5\n") == 4);

  // Missing required keys have no single line to blame.
  CHECK_THROWS_WITH_AS(parse_scenario("[reward]\nfamily = lottery\n"
                                      "budget = 0.5\n"),
                       "missing required key 'population.n'", ConfigError);
  CHECK_THROWS_WITH_AS(parse_scenario("[population]\nn = 4\n"),
                       "missing required key 'reward.family'", ConfigError);
  CHECK_THROWS_WITH_AS(parse_scenario("[population]\nn = 4\n[reward]\n"
                                      "family = lottery\n"),
                       "missing required key 'reward.budget'", ConfigError);
}

TEST_CASE("family parameters must match the declared family") {
  auto throws = [](const std::string& text) {
    CHECK_THROWS_AS(parse_scenario(text), ConfigError);
  };
  throws("[population]\nn = 4\n[reward]\nfamily = lottery\nbudget = 0.5\n"
         "r = 0.5\n");
  throws("[population]\nn = 4\n[reward]\nfamily = top_k\nbudget = 0.5\n"
         "tau = 0.2\n");
  throws("[population]\nn = 4\n[reward]\nfamily = tiered\nbudget = 0.5\n"
         "cuts = 0.5\n");  // probs missing
  throws("[population]\nn = 4\n[reward]\nfamily = explicit\nbudget = 0.5\n");
  throws("[population]\nn = 4\n[reward]\nfamily = explicit\nbudget = 0.5\n"
         "values = 0.2, 0.8\n");  // wrong length
  throws("[population]\nn = 4\n[reward]\nfamily = threshold_lottery\n"
         "budget = 0.5\ntau = 0.9\n");  // per-winner probability above 1

  ScenarioConfig ok = parse_scenario(
      "[population]\nn = 4\n[reward]\nfamily = tiered\nbudget = 0.5\n"
      "cuts = 0.5\nprobs = 0.2, 0.8\n");
  CHECK(ok.reward.cuts == std::vector<double>{0.5});
  CHECK(ok.reward.probs == std::vector<double>{0.2, 0.8});
}

TEST_CASE("serialization round-trips every reward family") {
  const char* scenarios[] = {
      kMinimal,
      kTwoGroups,
      "[population]\nn = 5\n[reward]\nfamily = top_k\nbudget = 0.4\n",
      "[population]\nn = 5\n[reward]\nfamily = threshold_lottery\n"
      "budget = 0.3\ntau = 0.5\n",
      "[population]\nn = 4\n[reward]\nfamily = tiered\nbudget = 0.5\n"
      "cuts = 0.5\nprobs = 0.2, 0.8\n",
      "[population]\nn = 3\n[reward]\nfamily = explicit\nbudget = 0.4\n"
      "values = 0.1, 0.4, 0.7\n[run]\nseed = 9\nprecision = 6\n",
  };
  for (const char* text : scenarios) {
    ScenarioConfig cfg = parse_scenario(text);
    std::string canon = serialize_scenario(cfg);
    ScenarioConfig reparsed = parse_scenario(canon);
    CHECK(reparsed == cfg);
    CHECK(serialize_scenario(reparsed) == canon);
  }
}
