#include "rankcontest/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rankcontest {

namespace {

class FloatFmt {
 public:
  explicit FloatFmt(int precision) : prec_(precision) {}

  std::string operator()(double v) const {
    if (!std::isfinite(v)) return "null";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec_, v);
    return buf;
  }

 private:
  int prec_;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
  out.flush();
  if (!out)
    throw std::runtime_error("cannot write output file " + path.string());
}

struct Emitter {
  const Population& pop;
  const ScenarioConfig& cfg;
  std::filesystem::path dir;
  FloatFmt fmt;
  double overtake_eps;

  void emit_equilibrium(const RewardSchedule& sched,
                        const TieBreakPolicy& tie_break) const {
    if (auto rep = validate_schedule(sched); !rep.ok())
      throw std::runtime_error("refusing to write an infeasible schedule: " +
                               rep.describe());

    EquilibriumOutcome outcome =
        solve_equilibrium(pop, sched, cfg.cost, tie_break);
    double regret = max_regret(pop, outcome, overtake_eps);
    bool rank_ok = rank_preservation_check(pop, outcome).pass();
    WelfareReport rep = report(pop, outcome, sched);

    std::ostringstream csv;
    csv << "agent_id,group,skill,env,w,slot,theta,lambda,score,cost,utility\n";
    for (const AgentOutcome& row : outcome.rows) {
      csv << row.agent_id << ','
          << csv_field(pop.groups[row.group].label) << ','
          << fmt(row.skill) << ',' << fmt(row.env) << ',' << fmt(row.w) << ','
          << row.slot << ',' << fmt(row.theta) << ',' << fmt(row.lambda)
          << ',' << fmt(row.score) << ',' << fmt(row.cost) << ','
          << fmt(row.utility) << '\n';
    }
    write_file(dir / "agents.csv", csv.str());

    std::ostringstream js;
    js << "{\n";
    js << "  \"budget\": " << fmt(rep.budget) << ",\n";
    js << "  \"applicant_welfare\": " << fmt(rep.applicant_welfare) << ",\n";
    js << "  \"school_total\": " << fmt(rep.school_total) << ",\n";
    js << "  \"school_per_seat\": " << fmt(rep.school_per_seat) << ",\n";
    js << "  \"planner\": " << fmt(rep.planner) << ",\n";
    js << "  \"total_cost\": " << fmt(rep.total_cost) << ",\n";
    js << "  \"access\": {";
    for (std::size_t i = 0; i < rep.access.size(); ++i) {
      if (i) js << ", ";
      js << json_string(pop.groups[rep.access[i].first].label) << ": "
         << fmt(rep.access[i].second);
    }
    js << "},\n";
    js << "  \"access_gap\": " << fmt(rep.access_gap) << ",\n";
    js << "  \"welfare_gap\": " << fmt(rep.welfare_gap) << ",\n";
    js << "  \"max_regret\": " << fmt(regret) << ",\n";
    js << "  \"rank_preservation\": " << (rank_ok ? "true" : "false") << "\n";
    js << "}\n";
    write_file(dir / "summary.json", js.str());
  }

  void emit_schedule(const RewardSchedule& sched) const {
    std::ostringstream csv;
    csv << "slot,theta,lambda\n";
    for (int i = 1; i <= sched.size(); ++i)
      csv << i << ',' << fmt(sched.theta(i)) << ','
          << fmt(sched.values[i - 1]) << '\n';
    write_file(dir / "schedule.csv", csv.str());
  }

  void emit_sweep(const SweepResult& res) const {
    std::ostringstream csv;
    csv << csv_field(res.param_name)
        << ",designer,applicant_welfare,school_total,school_per_seat,planner,"
           "total_cost,access_gap,welfare_gap,error\n";
    for (const SweepRow& row : res.rows) {
      csv << fmt(row.param) << ',';
      if (row.report) {
        const WelfareReport& r = *row.report;
        csv << fmt(row.designer) << ',' << fmt(r.applicant_welfare) << ','
            << fmt(r.school_total) << ',' << fmt(r.school_per_seat) << ','
            << fmt(r.planner) << ',' << fmt(r.total_cost) << ','
            << fmt(r.access_gap) << ',' << fmt(r.welfare_gap) << ',';
      } else {
        csv << ",,,,,,,,";
      }
      csv << csv_field(row.error) << '\n';
    }
    write_file(dir / "sweep.csv", csv.str());
  }

  void emit_search(const OptimizeResult& res, const std::string& csv_name,
                   const std::string& command) const {
    std::ostringstream csv;
    csv << "phase,params,designer,access_gap,feasible\n";
    for (const SearchTraceRow& row : res.trace) {
      std::string params;
      for (std::size_t i = 0; i < row.params.size(); ++i) {
        if (i) params += ';';
        params += fmt(row.params[i]);
      }
      csv << row.phase << ',' << params << ',' << fmt(row.designer) << ','
          << fmt(row.access_gap) << ',' << (row.feasible ? "true" : "false")
          << '\n';
    }
    write_file(dir / csv_name, csv.str());

    std::ostringstream js;
    js << "{\n";
    js << "  \"command\": " << json_string(command) << ",\n";
    js << "  \"param_names\": [";
    for (std::size_t i = 0; i < res.param_names.size(); ++i) {
      if (i) js << ", ";
      js << json_string(res.param_names[i]);
    }
    js << "],\n";
    js << "  \"params\": [";
    for (std::size_t i = 0; i < res.params.size(); ++i) {
      if (i) js << ", ";
      js << fmt(res.params[i]);
    }
    js << "],\n";
    js << "  \"value\": " << fmt(res.value) << ",\n";
    js << "  \"achieved_gap\": " << fmt(res.achieved_gap) << ",\n";
    js << "  \"fallback_lottery\": " << (res.fallback_lottery ? "true" : "false")
       << ",\n";
    js << "  \"evaluations\": " << res.trace.size() << "\n";
    js << "}\n";
    write_file(dir / "result.json", js.str());
  }
};

}  // namespace

DesignerObjective objective_by_name(const std::string& name) {
  if (name == "school") return {1.0, 0.0, 0.0, {}};
  if (name == "welfare") return {0.0, 1.0, 0.0, {}};
  if (name == "planner") return {0.0, 0.0, 1.0, {}};
  if (name == "mixed") return {1.0, 1.0, 1.0, {}};
  throw ConfigError("unknown objective '" + name +
                    "' (expected school, welfare, planner or mixed)");
}

int run_scenario(const ScenarioConfig& cfg, const RunArgs& args,
                 const std::string& out_dir, std::ostream& err) {
  try {
    const std::uint64_t seed =
        args.seed_override ? *args.seed_override : cfg.run.seed;
    const int precision =
        args.precision_override ? *args.precision_override : cfg.run.precision;
    if (precision < 1 || precision > 17)
      throw ConfigError("output precision must lie in [1, 17]");

    Population pop = make_population(cfg.population, seed);
    TieBreakPolicy tie_break{cfg.run.tie_break, seed};
    ContestSetup setup{pop, cfg.cost, tie_break};

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
      throw std::runtime_error("cannot create output directory " + out_dir +
                               ": " + ec.message());
    Emitter emit{pop, cfg, out_dir, FloatFmt(precision), cfg.run.overtake_eps};

    switch (args.command) {
      case Command::Equilibrium: {
        emit.emit_equilibrium(instantiate(cfg.reward), tie_break);
        break;
      }
      case Command::Sweep: {
        const SweepArgs& sw = args.sweep;
        if (sw.steps < 1) throw ConfigError("sweep needs at least one step");
        DesignerObjective obj = objective_by_name(sw.objective);
        std::vector<double> grid(sw.steps);
        for (int i = 0; i < sw.steps; ++i)
          grid[i] = sw.steps == 1 ? sw.from
                                  : sw.from + (sw.to - sw.from) * i /
                                                  (sw.steps - 1);
        SweepResult res = sweep(cfg.reward, sw.param, grid, setup, obj);
        emit.emit_sweep(res);
        emit.emit_equilibrium(instantiate(cfg.reward), tie_break);
        break;
      }
      case Command::Optimize: {
        DesignerObjective obj = objective_by_name(args.optimize.objective);
        OptimizeResult res = optimize(obj, cfg.reward, setup, seed);
        emit.emit_search(res, "optimize.csv", "optimize");
        emit.emit_schedule(res.schedule);
        emit.emit_equilibrium(res.schedule, tie_break);
        break;
      }
      case Command::Fairness: {
        const FairnessArgs& fa = args.fairness;
        if (fa.delta < 0.0)
          throw ConfigError("fairness delta must be non-negative");
        DesignerObjective obj = objective_by_name(fa.objective);
        obj.fairness_delta = fa.delta;
        OptimizeResult res =
            fairness_optimize(obj, fa.delta, cfg.reward, setup, seed);
        emit.emit_search(res, "fairness.csv", "fairness");
        emit.emit_schedule(res.schedule);
        emit.emit_equilibrium(res.schedule, tie_break);
        break;
      }
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace rankcontest
