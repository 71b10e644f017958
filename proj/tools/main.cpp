#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "rankcontest/runner.hpp"

namespace {

// RANKCONTEST_PRECISION overrides the scenario's output precision.
std::optional<int> precision_from_env(std::string& error) {
  const char* env = std::getenv("RANKCONTEST_PRECISION");
  if (env == nullptr) return std::nullopt;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1 || v > 17) {
    error = "RANKCONTEST_PRECISION must be an integer in [1, 17], got '" +
            std::string(env) + "'";
    return std::nullopt;
  }
  return static_cast<int>(v);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace rankcontest;

  CLI::App app{"Rank-order contest engine: applicant equilibria, welfare "
               "reports, and reward-schedule search"};
  app.fallthrough();
  app.require_subcommand(1);

  std::uint64_t seed_value = 0;
  CLI::Option* seed_opt =
      app.add_option("--seed", seed_value, "Override the scenario seed");

  std::string scenario_path;
  std::string out_dir = ".";
  RunArgs args;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", scenario_path, "Scenario config file")
        ->required();
    sub->add_option("--out", out_dir, "Output directory (default: .)");
  };

  CLI::App* eq = app.add_subcommand(
      "equilibrium", "Solve the contest and write agents.csv + summary.json");
  add_common(eq);

  CLI::App* sw = app.add_subcommand(
      "sweep", "Evaluate a grid of one reward parameter (sweep.csv)");
  add_common(sw);
  sw->add_option("--param", args.sweep.param,
                 "Swept parameter: r, tau or budget");
  sw->add_option("--from", args.sweep.from, "First grid value");
  sw->add_option("--to", args.sweep.to, "Last grid value");
  sw->add_option("--steps", args.sweep.steps, "Number of grid points");
  sw->add_option("--objective", args.sweep.objective,
                 "school, welfare, planner or mixed");

  CLI::App* opt = app.add_subcommand(
      "optimize", "Search the reward family for the best schedule");
  add_common(opt);
  opt->add_option("--objective", args.optimize.objective,
                  "school, welfare, planner or mixed");

  CLI::App* fair = app.add_subcommand(
      "fairness", "Best schedule whose group access gap stays within delta");
  add_common(fair);
  fair->add_option("--delta", args.fairness.delta, "Access gap cap");
  fair->add_option("--objective", args.fairness.objective,
                   "school, welfare, planner or mixed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (seed_opt->count() > 0) args.seed_override = seed_value;

  std::string env_error;
  args.precision_override = precision_from_env(env_error);
  if (!env_error.empty()) {
    std::cerr << "config error: " << env_error << "\n";
    return 1;
  }

  args.command = eq->parsed()    ? Command::Equilibrium
                 : sw->parsed()  ? Command::Sweep
                 : opt->parsed() ? Command::Optimize
                                 : Command::Fairness;

  std::ifstream in(scenario_path, std::ios::binary);
  if (!in) {
    std::cerr << "config error: cannot read scenario file '" << scenario_path
              << "'\n";
    return 1;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  ScenarioConfig cfg;
  try {
    cfg = parse_scenario(buf.str());
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  return run_scenario(cfg, args, out_dir, std::cerr);
}
