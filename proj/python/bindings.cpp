#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "rankcontest/design.hpp"
#include "rankcontest/equilibrium.hpp"
#include "rankcontest/model.hpp"
#include "rankcontest/runner.hpp"
#include "rankcontest/scenario.hpp"
#include "rankcontest/welfare.hpp"

namespace py = pybind11;
using namespace rankcontest;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Rank-order contest engine: applicant equilibria under "
            "rank-based reward schedules, welfare reports, and "
            "reward-schedule search.";

  py::class_<Agent>(m, "Agent")
      .def(py::init<>())
      .def_readwrite("id", &Agent::id)
      .def_readwrite("group", &Agent::group)
      .def_readwrite("skill", &Agent::skill)
      .def_readwrite("env", &Agent::env);
  m.def("effective_skill", &effective_skill, py::arg("agent"));

  py::class_<GroupInfo>(m, "GroupInfo")
      .def(py::init<>())
      .def_readwrite("label", &GroupInfo::label)
      .def_readwrite("fraction", &GroupInfo::fraction);

  py::class_<Population>(m, "Population")
      .def(py::init<>())
      .def_readwrite("agents", &Population::agents)
      .def_readwrite("groups", &Population::groups)
      .def("size", &Population::size);

  py::class_<CostModel>(m, "CostModel")
      .def(py::init<>())
      .def(py::init([](double gamma) { return CostModel{gamma}; }),
           py::arg("gamma"))
      .def_readwrite("gamma", &CostModel::gamma)
      .def("disutility", &CostModel::disutility, py::arg("effort"),
           py::arg("w"))
      .def("effort_for", &CostModel::effort_for, py::arg("cum"));

  py::class_<RewardSchedule>(m, "RewardSchedule")
      .def(py::init<>())
      .def(py::init([](std::vector<double> values, double budget) {
             return RewardSchedule{std::move(values), budget};
           }),
           py::arg("values"), py::arg("budget"))
      .def_readwrite("values", &RewardSchedule::values)
      .def_readwrite("budget", &RewardSchedule::budget)
      .def("size", &RewardSchedule::size)
      .def("theta", &RewardSchedule::theta, py::arg("slot"));

  py::class_<ScheduleReport>(m, "ScheduleReport")
      .def("ok", &ScheduleReport::ok)
      .def("describe", &ScheduleReport::describe);
  m.def("validate_schedule", &validate_schedule, py::arg("schedule"));

  py::enum_<SkillDistribution::Kind>(m, "SkillKind")
      .value("uniform", SkillDistribution::Kind::Uniform)
      .value("lognormal", SkillDistribution::Kind::Lognormal)
      .value("grid", SkillDistribution::Kind::Grid);
  py::class_<SkillDistribution>(m, "SkillDistribution")
      .def_static("uniform", &SkillDistribution::uniform, py::arg("lo"),
                  py::arg("hi"))
      .def_static("lognormal", &SkillDistribution::lognormal, py::arg("mu"),
                  py::arg("sigma"))
      .def_static("grid", &SkillDistribution::explicit_grid,
                  py::arg("values"))
      .def_readonly("kind", &SkillDistribution::kind)
      .def("quantile", &SkillDistribution::quantile, py::arg("q"));

  py::enum_<Placement>(m, "Placement")
      .value("quantile", Placement::Quantile)
      .value("sample", Placement::Sample);

  py::class_<GroupSpec>(m, "GroupSpec")
      .def(py::init<>())
      .def_readwrite("label", &GroupSpec::label)
      .def_readwrite("fraction", &GroupSpec::fraction)
      .def_readwrite("skill_dist", &GroupSpec::skill_dist)
      .def_readwrite("env", &GroupSpec::env)
      .def_readwrite("placement", &GroupSpec::placement);

  py::class_<PopulationSpec>(m, "PopulationSpec")
      .def(py::init<>())
      .def_readwrite("n", &PopulationSpec::n)
      .def_readwrite("groups", &PopulationSpec::groups);

  m.def("group_sizes", &group_sizes, py::arg("spec"));
  m.def("make_population", &make_population, py::arg("spec"),
        py::arg("seed") = 0);

  py::enum_<TieBreak>(m, "TieBreak")
      .value("by_id", TieBreak::ById)
      .value("random", TieBreak::Random);
  py::class_<TieBreakPolicy>(m, "TieBreakPolicy")
      .def(py::init<>())
      .def_readwrite("kind", &TieBreakPolicy::kind)
      .def_readwrite("seed", &TieBreakPolicy::seed);

  py::class_<AgentOutcome>(m, "AgentOutcome")
      .def_readonly("agent_id", &AgentOutcome::agent_id)
      .def_readonly("group", &AgentOutcome::group)
      .def_readonly("skill", &AgentOutcome::skill)
      .def_readonly("env", &AgentOutcome::env)
      .def_readonly("w", &AgentOutcome::w)
      .def_readonly("slot", &AgentOutcome::slot)
      .def_readonly("theta", &AgentOutcome::theta)
      .def_readonly("lambda_", &AgentOutcome::lambda)
      .def_readonly("cum", &AgentOutcome::cum)
      .def_readonly("score", &AgentOutcome::score)
      .def_readonly("cost", &AgentOutcome::cost)
      .def_readonly("utility", &AgentOutcome::utility);

  py::class_<EquilibriumOutcome>(m, "EquilibriumOutcome")
      .def_readonly("rows", &EquilibriumOutcome::rows)
      .def_readonly("schedule_budget", &EquilibriumOutcome::schedule_budget)
      .def_readonly("cost_gamma", &EquilibriumOutcome::cost_gamma)
      .def_readonly("verified_regret", &EquilibriumOutcome::verified_regret)
      .def("size", &EquilibriumOutcome::size)
      .def("by_slot", &EquilibriumOutcome::by_slot, py::arg("slot"),
           py::return_value_policy::copy)
      .def("by_agent", &EquilibriumOutcome::by_agent, py::arg("agent_id"),
           py::return_value_policy::copy);

  m.def("solve_equilibrium", &solve_equilibrium, py::arg("population"),
        py::arg("schedule"), py::arg("cost"),
        py::arg("tie_break") = TieBreakPolicy{});

  py::class_<BestResponseResult>(m, "BestResponseResult")
      .def_readonly("score", &BestResponseResult::score)
      .def_readonly("utility", &BestResponseResult::utility);
  m.def("best_response", &best_response, py::arg("population"),
        py::arg("outcome"), py::arg("agent_id"),
        py::arg("overtake_eps") = 1e-9);
  m.def("max_regret", &max_regret, py::arg("population"), py::arg("outcome"),
        py::arg("overtake_eps") = 1e-9);

  py::class_<RankCheckResult>(m, "RankCheckResult")
      .def("passed", &RankCheckResult::pass)
      .def("__bool__", &RankCheckResult::pass)
      .def_property_readonly("violations", [](const RankCheckResult& r) {
        std::vector<std::string> out;
        out.reserve(r.violations.size());
        for (const auto& v : r.violations) out.push_back(v.what);
        return out;
      });
  m.def("rank_preservation_check", &rank_preservation_check,
        py::arg("population"), py::arg("outcome"));

  py::class_<WelfareReport>(m, "WelfareReport")
      .def_readonly("budget", &WelfareReport::budget)
      .def_readonly("applicant_welfare", &WelfareReport::applicant_welfare)
      .def_readonly("school_total", &WelfareReport::school_total)
      .def_readonly("school_per_seat", &WelfareReport::school_per_seat)
      .def_readonly("planner", &WelfareReport::planner)
      .def_readonly("total_cost", &WelfareReport::total_cost)
      .def_readonly("access_gap", &WelfareReport::access_gap)
      .def_readonly("welfare_gap", &WelfareReport::welfare_gap)
      .def_readonly("access", &WelfareReport::access)
      .def_readonly("group_welfare", &WelfareReport::group_welfare);
  m.def("report", &report, py::arg("population"), py::arg("outcome"),
        py::arg("schedule"));

  py::class_<DesignerObjective>(m, "DesignerObjective")
      .def(py::init([](double school, double welfare, double planner,
                       std::optional<double> fairness_delta) {
             return DesignerObjective{school, welfare, planner,
                                      fairness_delta};
           }),
           py::arg("school") = 0.0, py::arg("welfare") = 0.0,
           py::arg("planner") = 0.0, py::arg("fairness_delta") = py::none())
      .def_readwrite("weight_school", &DesignerObjective::weight_school)
      .def_readwrite("weight_welfare", &DesignerObjective::weight_welfare)
      .def_readwrite("weight_planner", &DesignerObjective::weight_planner)
      .def_readwrite("fairness_delta", &DesignerObjective::fairness_delta);
  m.def("designer_value", &designer_value, py::arg("report"),
        py::arg("objective"));
  m.def("objective_by_name", &objective_by_name, py::arg("name"));

  py::enum_<RewardFamily::Kind>(m, "FamilyKind")
      .value("top_k", RewardFamily::Kind::TopK)
      .value("lottery", RewardFamily::Kind::Lottery)
      .value("threshold_lottery", RewardFamily::Kind::ThresholdLottery)
      .value("randomized_top_k", RewardFamily::Kind::RandomizedTopK)
      .value("tiered", RewardFamily::Kind::Tiered)
      .value("explicit", RewardFamily::Kind::Explicit);

  py::class_<RewardFamily>(m, "RewardFamily")
      .def(py::init<>())
      .def_readwrite("kind", &RewardFamily::kind)
      .def_readwrite("n", &RewardFamily::n)
      .def_readwrite("budget", &RewardFamily::budget)
      .def_readwrite("tau", &RewardFamily::tau)
      .def_readwrite("mix", &RewardFamily::mix)
      .def_readwrite("cuts", &RewardFamily::cuts)
      .def_readwrite("probs", &RewardFamily::probs)
      .def_readwrite("values", &RewardFamily::values);
  m.def("family_kind_name", &family_kind_name, py::arg("kind"));
  m.def("instantiate", &instantiate, py::arg("family"));
  m.def("pool_adjacent_violators",
        [](const std::vector<double>& raw) {
          return pool_adjacent_violators(raw);
        },
        py::arg("raw"));
  m.def("project_feasible",
        [](const std::vector<double>& raw, double budget) {
          return project_feasible(raw, budget);
        },
        py::arg("raw"), py::arg("budget"));

  py::class_<ContestSetup>(m, "ContestSetup")
      .def(py::init<>())
      .def_readwrite("population", &ContestSetup::population)
      .def_readwrite("cost", &ContestSetup::cost)
      .def_readwrite("tie_break", &ContestSetup::tie_break);

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("param", &SweepRow::param)
      .def_readonly("report", &SweepRow::report)
      .def_readonly("designer", &SweepRow::designer)
      .def_readonly("error", &SweepRow::error);
  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("param_name", &SweepResult::param_name)
      .def_readonly("rows", &SweepResult::rows);
  m.def("sweep",
        [](const RewardFamily& base, const std::string& param,
           const std::vector<double>& grid, const ContestSetup& setup,
           const DesignerObjective& obj) {
          return sweep(base, param, grid, setup, obj);
        },
        py::arg("family"), py::arg("param"), py::arg("grid"),
        py::arg("setup"), py::arg("objective"));

  py::class_<SearchTraceRow>(m, "SearchTraceRow")
      .def_readonly("phase", &SearchTraceRow::phase)
      .def_readonly("params", &SearchTraceRow::params)
      .def_readonly("designer", &SearchTraceRow::designer)
      .def_readonly("access_gap", &SearchTraceRow::access_gap)
      .def_readonly("feasible", &SearchTraceRow::feasible);
  py::class_<OptimizeResult>(m, "OptimizeResult")
      .def_readonly("param_names", &OptimizeResult::param_names)
      .def_readonly("params", &OptimizeResult::params)
      .def_readonly("schedule", &OptimizeResult::schedule)
      .def_readonly("value", &OptimizeResult::value)
      .def_readonly("report", &OptimizeResult::report)
      .def_readonly("achieved_gap", &OptimizeResult::achieved_gap)
      .def_readonly("fallback_lottery", &OptimizeResult::fallback_lottery);
  m.def("optimize", &optimize, py::arg("objective"), py::arg("family"),
        py::arg("setup"), py::arg("seed") = 0);
  m.def("fairness_optimize", &fairness_optimize, py::arg("objective"),
        py::arg("delta"), py::arg("family"), py::arg("setup"),
        py::arg("seed") = 0);

  py::class_<RunOptions>(m, "RunOptions")
      .def(py::init<>())
      .def_readwrite("seed", &RunOptions::seed)
      .def_readwrite("tie_break", &RunOptions::tie_break)
      .def_readwrite("overtake_eps", &RunOptions::overtake_eps)
      .def_readwrite("precision", &RunOptions::precision);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("population", &ScenarioConfig::population)
      .def_readwrite("cost", &ScenarioConfig::cost)
      .def_readwrite("reward", &ScenarioConfig::reward)
      .def_readwrite("run", &ScenarioConfig::run)
      .def("__eq__", [](const ScenarioConfig& a, const ScenarioConfig& b) {
        return a == b;
      });

  m.def("parse_scenario", &parse_scenario, py::arg("text"));
  m.def("serialize_scenario", &serialize_scenario, py::arg("config"));

  py::enum_<Command>(m, "Command")
      .value("equilibrium", Command::Equilibrium)
      .value("sweep", Command::Sweep)
      .value("optimize", Command::Optimize)
      .value("fairness", Command::Fairness);

  py::class_<SweepArgs>(m, "SweepArgs")
      .def(py::init<>())
      .def_readwrite("param", &SweepArgs::param)
      .def_readwrite("from_", &SweepArgs::from)
      .def_readwrite("to", &SweepArgs::to)
      .def_readwrite("steps", &SweepArgs::steps)
      .def_readwrite("objective", &SweepArgs::objective);
  py::class_<OptimizeArgs>(m, "OptimizeArgs")
      .def(py::init<>())
      .def_readwrite("objective", &OptimizeArgs::objective);
  py::class_<FairnessArgs>(m, "FairnessArgs")
      .def(py::init<>())
      .def_readwrite("delta", &FairnessArgs::delta)
      .def_readwrite("objective", &FairnessArgs::objective);
  py::class_<RunArgs>(m, "RunArgs")
      .def(py::init<>())
      .def_readwrite("command", &RunArgs::command)
      .def_readwrite("sweep", &RunArgs::sweep)
      .def_readwrite("optimize", &RunArgs::optimize)
      .def_readwrite("fairness", &RunArgs::fairness)
      .def_readwrite("seed_override", &RunArgs::seed_override)
      .def_readwrite("precision_override", &RunArgs::precision_override);

  m.def("run_scenario",
        [](const ScenarioConfig& cfg, const RunArgs& args,
           const std::string& out_dir) {
          std::ostringstream err;
          int code = run_scenario(cfg, args, out_dir, err);
          return py::make_tuple(code, err.str());
        },
        py::arg("config"), py::arg("args"), py::arg("out_dir"),
        "Returns (exit_code, error_text).");
}
