// Acceptance gate: ten end-to-end checks against closed forms and
// properties, one PASS/FAIL line each. Exits nonzero if any check fails.
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rankcontest/design.hpp"
#include "rankcontest/equilibrium.hpp"
#include "rankcontest/model.hpp"
#include "rankcontest/welfare.hpp"

using namespace rankcontest;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  std::string name;
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void expect_near(double got, double want, double tol,
                   const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      std::ostringstream os;
      os << what << ": got " << got << ", want " << want << " tol " << tol;
      failures.push_back(os.str());
    }
  }
};

Population homogeneous(int n, double w) {
  Population pop;
  pop.groups = {{"all", 1.0}};
  for (int i = 0; i < n; ++i) pop.agents.push_back({i, 0, w, 1.0});
  return pop;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

void lottery_identity(Criterion& c) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Population pop;
  pop.groups = {{"A", 0.5}, {"B", 0.5}};
  int n = 37;
  for (int i = 0; i < n; ++i)
    pop.agents.push_back({i, i % 2, 0.2 + 2.0 * u(rng), 0.3 + u(rng)});
  double budget = 0.3;
  RewardSchedule sched{std::vector<double>(n, budget), budget};
  EquilibriumOutcome out = solve_equilibrium(pop, sched, CostModel{1.7});
  for (const AgentOutcome& row : out.rows) {
    c.expect(std::abs(row.score) <= 1e-12, "score must be 0");
    c.expect(std::abs(row.utility - budget) <= 1e-12,
             "utility must equal the budget");
  }
  c.expect_near(max_regret(pop, out), 0.0, 1e-12, "max_regret");
  WelfareReport rep = report(pop, out, sched);
  c.expect_near(rep.access_gap, 0.0, 1e-12, "access_gap");
}

void rent_dissipation(Criterion& c) {
  const int n = 1000;
  Population pop = homogeneous(n, 1.0);
  RewardFamily fam;
  fam.kind = RewardFamily::Kind::TopK;
  fam.n = n;
  fam.budget = 0.5;
  RewardSchedule sched = instantiate(fam);
  EquilibriumOutcome out = solve_equilibrium(pop, sched, CostModel{1.0});
  for (const AgentOutcome& row : out.rows) {
    if (row.slot > n / 2)
      c.expect_near(row.score, 1.0, 1e-9, "admitted score");
    c.expect_near(row.utility, 0.0, 1e-9, "utility");
  }
  WelfareReport rep = report(pop, out, sched);
  c.expect_near(rep.applicant_welfare, 0.0, 1e-9, "applicant_welfare");
  c.expect_near(rep.school_total, 0.5, 1e-9, "school_total");
}

void floor_identity(Criterion& c) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 3 + static_cast<int>(u(rng) * 40);
    Population pop = homogeneous(n, 0.3 + 2.0 * u(rng));
    std::vector<double> lambda(n);
    for (double& v : lambda) v = u(rng);
    std::sort(lambda.begin(), lambda.end());
    double mean = 0.0;
    for (double v : lambda) mean += v;
    mean /= n;
    RewardSchedule sched{lambda, mean};
    double gamma = 1.0 + 2.0 * u(rng);
    EquilibriumOutcome out = solve_equilibrium(pop, sched, CostModel{gamma});
    WelfareReport rep = report(pop, out, sched);
    c.expect_near(rep.applicant_welfare, lambda.front(), 1e-9,
                  "mean utility vs lowest reward, trial " +
                      std::to_string(trial));
  }
}

void continuum_oracle(Criterion& c) {
  const int n = 1000;
  Population pop;
  pop.groups = {{"all", 1.0}};
  std::vector<double> lambda(n);
  for (int i = 0; i < n; ++i) {
    double theta = (i + 0.5) / n;
    pop.agents.push_back({i, 0, theta, 1.0});
    lambda[i] = theta;
  }
  RewardSchedule sched{lambda, 0.5};
  EquilibriumOutcome out = solve_equilibrium(pop, sched, CostModel{1.0});
  double worst_score = 0.0, worst_utility = 0.0;
  for (const AgentOutcome& row : out.rows) {
    worst_score =
        std::max(worst_score, std::abs(row.score - row.theta * row.theta / 2));
    worst_utility =
        std::max(worst_utility, std::abs(row.utility - row.theta / 2));
  }
  c.expect(worst_score <= 2.0 / n,
           "sup |score - theta^2/2| = " + std::to_string(worst_score));
  c.expect(worst_utility <= 2.0 / n,
           "sup |utility - theta/2| = " + std::to_string(worst_utility));
}

double linear_schedule_regret(int n) {
  Population pop;
  pop.groups = {{"all", 1.0}};
  std::vector<double> lambda(n);
  for (int i = 0; i < n; ++i) {
    double theta = (i + 0.5) / n;
    pop.agents.push_back({i, 0, 0.5 + theta, 1.0});
    lambda[i] = 0.8 * theta;
  }
  RewardSchedule sched{lambda, 0.4};
  EquilibriumOutcome out = solve_equilibrium(pop, sched, CostModel{1.0});
  return max_regret(pop, out);
}

void equilibrium_certificate(Criterion& c) {
  double r500 = linear_schedule_regret(500);
  double r1000 = linear_schedule_regret(1000);
  c.expect(r500 <= 0.02, "regret at n=500 is " + std::to_string(r500));
  double ratio = r500 / r1000;
  c.expect(ratio >= 2.0 / 1.5 && ratio <= 2.0 * 1.5,
           "regret halving ratio is " + std::to_string(ratio));
}

void rank_preservation(Criterion& c) {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 5 + static_cast<int>(u(rng) * 55);
    Population pop;
    pop.groups = {{"A", 0.5}, {"B", 0.5}};
    double env_b = 0.2 + u(rng);
    for (int i = 0; i < n; ++i) {
      bool in_b = i % 2 == 1;
      double skill = u(rng) < 0.5 ? 0.1 + 2.0 * u(rng)
                                  : std::exp(0.5 * (u(rng) - 0.5));
      pop.agents.push_back({i, in_b ? 1 : 0, skill, in_b ? env_b : 1.0});
    }
    std::vector<double> lambda(n);
    for (double& v : lambda) v = u(rng);
    std::sort(lambda.begin(), lambda.end());
    double mean = 0.0;
    for (double v : lambda) mean += v;
    mean /= n;
    RewardSchedule sched{lambda, mean};
    double gamma = 1.0 + 2.0 * u(rng);
    EquilibriumOutcome out = solve_equilibrium(pop, sched, CostModel{gamma});
    RankCheckResult res = rank_preservation_check(pop, out);
    c.expect(res.pass(), "violation in trial " + std::to_string(trial));
  }
}

void randomness_tradeoff(Criterion& c) {
  const int n = 1000;
  const double budget = 0.5;
  Population pop = homogeneous(n, 1.0);
  CostModel cost{1.0};
  double prev_welfare = -1.0, prev_school = 2.0;
  for (int step = 0; step <= 20; ++step) {
    double r = step / 20.0;
    RewardFamily fam;
    fam.kind = RewardFamily::Kind::RandomizedTopK;
    fam.n = n;
    fam.budget = budget;
    fam.mix = r;
    RewardSchedule sched = instantiate(fam);
    EquilibriumOutcome out = solve_equilibrium(pop, sched, cost);
    WelfareReport rep = report(pop, out, sched);

    c.expect_near(rep.applicant_welfare, r * budget, 1e-6,
                  "applicant_welfare at r=" + std::to_string(r));
    double school = budget * (1 - r) * ((1 - r) + r * budget);
    c.expect_near(rep.school_total, school, 1e-6,
                  "school_total at r=" + std::to_string(r));
    c.expect(rep.applicant_welfare > prev_welfare,
             "welfare not strictly increasing at r=" + std::to_string(r));
    c.expect(rep.school_total < prev_school,
             "school value not strictly decreasing at r=" + std::to_string(r));
    prev_welfare = rep.applicant_welfare;
    prev_school = rep.school_total;
  }
}

void disparate_impact(Criterion& c) {
  const int n = 200;
  Population pop;
  pop.groups = {{"A", 0.5}, {"B", 0.5}};
  for (int i = 0; i < n; ++i) {
    int group = i < n / 2 ? 0 : 1;
    int pos = group == 0 ? i : i - n / 2;
    double skill = 0.5 + (pos + 0.5) / (n / 2);  // same quantiles per group
    pop.agents.push_back({i, group, skill, group == 0 ? 1.0 : 0.4});
  }
  CostModel cost{1.0};

  auto report_at = [&](double r) {
    RewardFamily fam;
    fam.kind = RewardFamily::Kind::RandomizedTopK;
    fam.n = n;
    fam.budget = 0.5;
    fam.mix = r;
    RewardSchedule sched = instantiate(fam);
    EquilibriumOutcome out = solve_equilibrium(pop, sched, cost);
    return report(pop, out, sched);
  };

  WelfareReport topk = report_at(0.0);
  c.expect(topk.access[0].second > topk.access[1].second,
           "top-k must favor the unhandicapped group");

  double prev_gap = 2.0;
  for (int step = 0; step <= 20; ++step) {
    double r = step / 20.0;
    WelfareReport rep = report_at(r);
    c.expect(rep.access_gap <= prev_gap + 1e-12,
             "access gap increased at r=" + std::to_string(r));
    prev_gap = rep.access_gap;
    if (step == 20)
      c.expect_near(rep.access_gap, 0.0, 1e-12, "access gap at r=1");
  }

  WelfareReport lottery = report_at(1.0);
  c.expect_near(lottery.welfare_gap, 0.0, 1e-12, "lottery welfare gap");
  c.expect(topk.welfare_gap > lottery.welfare_gap,
           "top-k must widen the welfare gap over the lottery");
}

void projection_correctness(Criterion& c) {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 2 + static_cast<int>(u(rng) * 50);
    double budget = u(rng);
    std::vector<double> raw(n);
    for (double& x : raw) x = 0.5 + noise(rng);
    RewardSchedule sched = project_feasible(raw, budget);

    double mean = 0.0;
    for (int i = 0; i < n; ++i) {
      c.expect(sched.values[i] >= 0.0 && sched.values[i] <= 1.0,
               "value outside [0, 1] in trial " + std::to_string(trial));
      if (i > 0)
        c.expect(sched.values[i] >= sched.values[i - 1],
                 "not monotone in trial " + std::to_string(trial));
      mean += sched.values[i];
    }
    c.expect(std::abs(mean / n - budget) <= 1e-9,
             "mean off budget in trial " + std::to_string(trial));

    RewardSchedule again = project_feasible(sched.values, budget);
    for (int i = 0; i < n; ++i)
      c.expect(std::abs(again.values[i] - sched.values[i]) <= 1e-12,
               "not idempotent in trial " + std::to_string(trial));
  }
}

void cli_determinism(Criterion& c) {
  const char* cli = std::getenv("RANKCONTEST_CLI");
  if (!cli || !*cli) {
    c.expect(false, "RANKCONTEST_CLI is not set to the CLI binary");
    return;
  }
  fs::path work = fs::temp_directory_path() /
                  ("rankcontest-accept-" + std::to_string(::getpid()));
  fs::remove_all(work);
  fs::create_directories(work);
  fs::path scenario = work / "scenario.ini";
  {
    std::ofstream out(scenario);
    out << "[population]\nn = 40\n\n"
        << "[population.group.A]\nskill = lognormal(0, 0.4)\n"
        << "placement = sample\n\n"
        << "[population.group.B]\nskill = uniform(0.2, 1.8)\nenv = 0.7\n\n"
        << "[reward]\nfamily = top_k\nbudget = 0.35\n\n"
        << "[run]\nseed = 11\ntie_break = random\n";
  }

  auto run_once = [&](const std::string& tag) {
    fs::path dir = work / tag;
    std::string cmd = std::string(cli) + " equilibrium --scenario " +
                      scenario.string() + " --out " + dir.string() +
                      " > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0 ? dir : fs::path{};
  };
  fs::path first = run_once("first");
  fs::path second = run_once("second");
  c.expect(!first.empty() && !second.empty(), "CLI run failed");
  if (!first.empty() && !second.empty()) {
    std::string agents = slurp(first / "agents.csv");
    c.expect(agents == slurp(second / "agents.csv"),
             "agents.csv differs between identical runs");
    c.expect(slurp(first / "summary.json") == slurp(second / "summary.json"),
             "summary.json differs between identical runs");
    const std::string header =
        "agent_id,group,skill,env,w,slot,theta,lambda,score,cost,utility\n";
    c.expect(agents.rfind(header, 0) == 0, "agents.csv header mismatch");
  }
  fs::remove_all(work);
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<void(Criterion&)>>> checks =
      {{"lottery identity: flat rewards, zero effort", lottery_identity},
       {"rent dissipation under homogeneous top-half admission",
        rent_dissipation},
       {"mean utility equals the lowest reward on homogeneous fields",
        floor_identity},
       {"continuum closed form on the linear-skill grid", continuum_oracle},
       {"deviation oracle certifies an epsilon-equilibrium",
        equilibrium_certificate},
       {"equilibrium scores preserve the effective-skill order",
        rank_preservation},
       {"randomness trades school value for applicant welfare",
        randomness_tradeoff},
       {"deterministic admission amplifies group disparities",
        disparate_impact},
       {"feasibility projection is monotone, bounded, exact in mean",
        projection_correctness},
       {"CLI output is byte-deterministic with the exact header",
        cli_determinism}};

  int failed = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    Criterion c{checks[i].first, {}};
    try {
      checks[i].second(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    if (c.failures.empty()) {
      std::cout << "PASS  [" << i + 1 << "] " << c.name << "\n";
    } else {
      ++failed;
      std::cout << "FAIL  [" << i + 1 << "] " << c.name << "\n";
      std::size_t shown = std::min<std::size_t>(c.failures.size(), 5);
      for (std::size_t k = 0; k < shown; ++k)
        std::cout << "      - " << c.failures[k] << "\n";
      if (c.failures.size() > shown)
        std::cout << "      - (" << c.failures.size() - shown << " more)\n";
    }
  }
  if (failed) {
    std::cout << failed << " of " << checks.size() << " checks failed\n";
    return 1;
  }
  std::cout << "all " << checks.size() << " checks passed\n";
  return 0;
}
