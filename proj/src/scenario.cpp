#include "rankcontest/scenario.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

namespace rankcontest {

ConfigError::ConfigError(const std::string& msg, int line)
    : std::runtime_error(
          line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
      line_(line) {}

namespace {

constexpr const char* kGroupPrefix = "population.group.";

struct Entry {
  std::string key;  // full dotted path, e.g. "reward.budget"
  std::string value;
  int line = 0;
};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& value,
                    int line) {
  std::string v = value;
  if (!v.empty() && v.front() == '+') v.erase(0, 1);
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError(
        "expected a finite number for '" + key + "', got '" + value + "'",
        line);
  return out;
}

long long parse_integer(const std::string& key, const std::string& value,
                        int line) {
  std::string v = value;
  if (!v.empty() && v.front() == '+') v.erase(0, 1);
  long long out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError(
        "expected an integer for '" + key + "', got '" + value + "'", line);
  return out;
}

std::uint64_t parse_seed(const std::string& key, const std::string& value,
                         int line) {
  std::string v = value;
  if (!v.empty() && v.front() == '+') v.erase(0, 1);
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError(
        "expected a non-negative integer for '" + key + "', got '" + value +
            "'",
        line);
  return out;
}

std::vector<double> parse_list(const std::string& key,
                               const std::string& value, int line) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    out.push_back(parse_number(key, trim(item), line));
  }
  if (out.empty())
    throw ConfigError("expected a comma-separated list for '" + key + "'",
                      line);
  return out;
}

SkillDistribution parse_dist(const std::string& key, const std::string& value,
                             int line) {
  auto open = value.find('(');
  if (open == std::string::npos || value.back() != ')')
    throw ConfigError("expected uniform(lo, hi), lognormal(mu, sigma) or "
                      "grid(v1, v2, ...) for '" +
                          key + "', got '" + value + "'",
                      line);
  std::string name = trim(value.substr(0, open));
  std::string args = value.substr(open + 1, value.size() - open - 2);
  std::vector<double> xs = parse_list(key, args, line);
  try {
    if (name == "uniform") {
      if (xs.size() != 2)
        throw std::invalid_argument("uniform takes exactly two arguments");
      return SkillDistribution::uniform(xs[0], xs[1]);
    }
    if (name == "lognormal") {
      if (xs.size() != 2)
        throw std::invalid_argument("lognormal takes exactly two arguments");
      return SkillDistribution::lognormal(xs[0], xs[1]);
    }
    if (name == "grid") return SkillDistribution::explicit_grid(xs);
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what(), line);
  }
  throw ConfigError("unknown skill distribution '" + name + "'", line);
}

bool known_section(const std::string& name) {
  return name == "population" || name == "cost" || name == "reward" ||
         name == "run" ||
         (name.starts_with(kGroupPrefix) &&
          name.size() > std::string(kGroupPrefix).size());
}

struct GroupDraft {
  std::string label;
  int line = 0;
  std::optional<double> fraction;
  std::optional<SkillDistribution> skill;
  double env = 1.0;
  Placement placement = Placement::Quantile;
};

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
  std::vector<Entry> entries;
  std::vector<std::pair<std::string, int>> sections;
  std::map<std::string, int> seen;  // dotted key -> first line
  std::string section;
  int lineno = 0;

  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("malformed section header '" + line + "'", lineno);
      std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw ConfigError("empty section name", lineno);
      for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' &&
            c != '-' && c != '.')
          throw ConfigError(
              "invalid character in section name '" + name + "'", lineno);
      section = name;
      sections.emplace_back(name, lineno);
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value', got '" + line + "'", lineno);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", lineno);
    if (section.empty())
      throw ConfigError("key '" + key + "' appears before any [section]",
                        lineno);
    std::string full = section + "." + key;
    if (auto [it, inserted] = seen.emplace(full, lineno); !inserted)
      throw ConfigError("duplicate key '" + full + "' (first set at line " +
                            std::to_string(it->second) + ")",
                        lineno);
    entries.push_back({std::move(full), std::move(value), lineno});
  }

  // Group order follows the first appearance of each group section.
  std::vector<GroupDraft> groups;
  auto group_of = [&](const std::string& label, int line) -> GroupDraft& {
    for (auto& g : groups)
      if (g.label == label) return g;
    groups.push_back({label, line, {}, {}, 1.0, Placement::Quantile});
    return groups.back();
  };
  const std::string group_prefix = kGroupPrefix;
  for (const auto& [name, line] : sections) {
    if (name.starts_with(group_prefix)) {
      std::string label = name.substr(group_prefix.size());
      if (label.find('.') != std::string::npos)
        throw ConfigError("group label '" + label + "' must not contain '.'",
                          line);
      group_of(label, line);
    }
  }

  std::optional<long long> n;
  std::optional<RewardFamily::Kind> family;
  int family_line = 0;
  std::optional<double> budget;
  std::optional<std::pair<double, int>> r_param, tau_param;
  std::optional<std::pair<std::vector<double>, int>> cuts, probs, values;
  CostModel cost;
  RunOptions run;

  for (const Entry& e : entries) {
    const std::string& k = e.key;
    if (k == "population.n") {
      long long v = parse_integer(k, e.value, e.line);
      if (v < 2)
        throw ConfigError("population.n must be at least 2", e.line);
      n = v;
    } else if (k == "cost.gamma") {
      cost.gamma = parse_number(k, e.value, e.line);
      if (cost.gamma < 1.0)
        throw ConfigError("cost.gamma must be at least 1", e.line);
    } else if (k == "reward.family") {
      if (e.value == "top_k") family = RewardFamily::Kind::TopK;
      else if (e.value == "lottery") family = RewardFamily::Kind::Lottery;
      else if (e.value == "threshold_lottery")
        family = RewardFamily::Kind::ThresholdLottery;
      else if (e.value == "randomized_top_k")
        family = RewardFamily::Kind::RandomizedTopK;
      else if (e.value == "tiered") family = RewardFamily::Kind::Tiered;
      else if (e.value == "explicit") family = RewardFamily::Kind::Explicit;
      else
        throw ConfigError("unknown reward family '" + e.value + "'", e.line);
      family_line = e.line;
    } else if (k == "reward.budget") {
      budget = parse_number(k, e.value, e.line);
      if (*budget < 0.0 || *budget > 1.0)
        throw ConfigError("reward.budget must lie in [0, 1]", e.line);
    } else if (k == "reward.r") {
      double v = parse_number(k, e.value, e.line);
      if (v < 0.0 || v > 1.0)
        throw ConfigError("reward.r must lie in [0, 1]", e.line);
      r_param = {v, e.line};
    } else if (k == "reward.tau") {
      double v = parse_number(k, e.value, e.line);
      if (v < 0.0 || v > 1.0)
        throw ConfigError("reward.tau must lie in [0, 1]", e.line);
      tau_param = {v, e.line};
    } else if (k == "reward.cuts") {
      cuts = {parse_list(k, e.value, e.line), e.line};
    } else if (k == "reward.probs") {
      probs = {parse_list(k, e.value, e.line), e.line};
    } else if (k == "reward.values") {
      values = {parse_list(k, e.value, e.line), e.line};
    } else if (k == "run.seed") {
      run.seed = parse_seed(k, e.value, e.line);
    } else if (k == "run.tie_break") {
      if (e.value == "id") run.tie_break = TieBreak::ById;
      else if (e.value == "random") run.tie_break = TieBreak::Random;
      else
        throw ConfigError(
            "run.tie_break must be 'id' or 'random', got '" + e.value + "'",
            e.line);
    } else if (k == "run.overtake_eps") {
      run.overtake_eps = parse_number(k, e.value, e.line);
      if (run.overtake_eps <= 0.0)
        throw ConfigError("run.overtake_eps must be positive", e.line);
    } else if (k == "run.precision") {
      long long v = parse_integer(k, e.value, e.line);
      if (v < 1 || v > 17)
        throw ConfigError("run.precision must lie in [1, 17]", e.line);
      run.precision = static_cast<int>(v);
    } else if (k.starts_with(group_prefix)) {
      std::string rest = k.substr(group_prefix.size());
      auto dot = rest.find('.');
      std::string label = dot == std::string::npos ? rest : rest.substr(0, dot);
      std::string field = dot == std::string::npos ? "" : rest.substr(dot + 1);
      GroupDraft& g = group_of(label, e.line);
      if (field == "fraction") {
        double v = parse_number(k, e.value, e.line);
        if (v <= 0.0 || v > 1.0)
          throw ConfigError("group fraction must lie in (0, 1]", e.line);
        g.fraction = v;
      } else if (field == "skill") {
        g.skill = parse_dist(k, e.value, e.line);
      } else if (field == "env") {
        g.env = parse_number(k, e.value, e.line);
        if (g.env <= 0.0)
          throw ConfigError("group env must be positive", e.line);
      } else if (field == "placement") {
        if (e.value == "quantile") g.placement = Placement::Quantile;
        else if (e.value == "sample") g.placement = Placement::Sample;
        else
          throw ConfigError("placement must be 'quantile' or 'sample', got '" +
                                e.value + "'",
                            e.line);
      } else {
        throw ConfigError("unknown key '" + k + "'", e.line);
      }
    } else {
      throw ConfigError("unknown key '" + k + "'", e.line);
    }
  }

  for (const auto& [name, line] : sections)
    if (!known_section(name))
      throw ConfigError("unknown section '" + name + "'", line);

  if (!n) throw ConfigError("missing required key 'population.n'");
  if (!family) throw ConfigError("missing required key 'reward.family'");
  if (!budget) throw ConfigError("missing required key 'reward.budget'");

  // Family parameters must match the declared family.
  auto family_is = [&](RewardFamily::Kind kind) { return *family == kind; };
  if (r_param && !family_is(RewardFamily::Kind::RandomizedTopK))
    throw ConfigError("key 'reward.r' applies to family randomized_top_k",
                      r_param->second);
  if (tau_param && !family_is(RewardFamily::Kind::ThresholdLottery))
    throw ConfigError("key 'reward.tau' applies to family threshold_lottery",
                      tau_param->second);
  if (cuts && !family_is(RewardFamily::Kind::Tiered))
    throw ConfigError("key 'reward.cuts' applies to family tiered",
                      cuts->second);
  if (probs && !family_is(RewardFamily::Kind::Tiered))
    throw ConfigError("key 'reward.probs' applies to family tiered",
                      probs->second);
  if (values && !family_is(RewardFamily::Kind::Explicit))
    throw ConfigError("key 'reward.values' applies to family explicit",
                      values->second);
  if (family_is(RewardFamily::Kind::Tiered) && (!cuts || !probs))
    throw ConfigError(
        "tiered reward requires both 'reward.cuts' and 'reward.probs'",
        family_line);
  if (family_is(RewardFamily::Kind::Explicit) && !values)
    throw ConfigError("explicit reward requires 'reward.values'", family_line);
  if (tau_param && tau_param->first > 1.0 - *budget + 1e-12)
    throw ConfigError("reward.tau must lie in [0, 1 - budget]",
                      tau_param->second);

  // Groups: left-out fractions share whatever mass remains.
  if (groups.empty())
    groups.push_back(
        {"all", 0, 1.0, SkillDistribution::uniform(0.0, 1.0), 1.0,
         Placement::Quantile});
  double claimed = 0.0;
  int unset = 0;
  for (const auto& g : groups) {
    if (g.fraction) claimed += *g.fraction;
    else ++unset;
  }
  if (unset == 0) {
    if (std::abs(claimed - 1.0) > 1e-9)
      throw ConfigError("group fractions sum to " + std::to_string(claimed) +
                        ", expected 1");
  } else {
    double remaining = 1.0 - claimed;
    if (remaining <= 0.0)
      throw ConfigError(
          "group fractions leave no mass for the groups without one");
    for (auto& g : groups)
      if (!g.fraction) g.fraction = remaining / unset;
  }

  ScenarioConfig cfg;
  cfg.population.n = static_cast<int>(*n);
  for (auto& g : groups) {
    GroupSpec spec;
    spec.label = g.label;
    spec.fraction = *g.fraction;
    spec.skill_dist =
        g.skill ? *g.skill : SkillDistribution::uniform(0.0, 1.0);
    spec.env = g.env;
    spec.placement = g.placement;
    cfg.population.groups.push_back(std::move(spec));
  }
  cfg.cost = cost;
  cfg.run = run;
  cfg.reward.kind = *family;
  cfg.reward.n = cfg.population.n;
  cfg.reward.budget = *budget;
  if (r_param) cfg.reward.mix = r_param->first;
  if (tau_param) cfg.reward.tau = tau_param->first;
  if (cuts) cfg.reward.cuts = cuts->first;
  if (probs) cfg.reward.probs = probs->first;
  if (values) cfg.reward.values = values->first;

  if (family_is(RewardFamily::Kind::Explicit) &&
      static_cast<int>(cfg.reward.values.size()) != cfg.population.n)
    throw ConfigError("reward.values needs exactly population.n entries",
                      values->second);

  try {
    (void)instantiate(cfg.reward);
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("reward family rejected: ") + ex.what());
  }
  return cfg;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string fmt_list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += fmt(xs[i]);
  }
  return out;
}

std::string fmt_dist(const SkillDistribution& d) {
  switch (d.kind) {
    case SkillDistribution::Kind::Uniform:
      return "uniform(" + fmt(d.a) + ", " + fmt(d.b) + ")";
    case SkillDistribution::Kind::Lognormal:
      return "lognormal(" + fmt(d.a) + ", " + fmt(d.b) + ")";
    case SkillDistribution::Kind::Grid:
      return "grid(" + fmt_list(d.grid) + ")";
  }
  return "";
}

}  // namespace

std::string serialize_scenario(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "[population]\n";
  out << "n = " << cfg.population.n << "\n\n";
  for (const auto& g : cfg.population.groups) {
    out << "[population.group." << g.label << "]\n";
    out << "fraction = " << fmt(g.fraction) << "\n";
    out << "skill = " << fmt_dist(g.skill_dist) << "\n";
    out << "env = " << fmt(g.env) << "\n";
    out << "placement = "
        << (g.placement == Placement::Quantile ? "quantile" : "sample")
        << "\n\n";
  }
  out << "[cost]\n";
  out << "gamma = " << fmt(cfg.cost.gamma) << "\n\n";
  out << "[reward]\n";
  out << "family = " << family_kind_name(cfg.reward.kind) << "\n";
  out << "budget = " << fmt(cfg.reward.budget) << "\n";
  switch (cfg.reward.kind) {
    case RewardFamily::Kind::RandomizedTopK:
      out << "r = " << fmt(cfg.reward.mix) << "\n";
      break;
    case RewardFamily::Kind::ThresholdLottery:
      out << "tau = " << fmt(cfg.reward.tau) << "\n";
      break;
    case RewardFamily::Kind::Tiered:
      out << "cuts = " << fmt_list(cfg.reward.cuts) << "\n";
      out << "probs = " << fmt_list(cfg.reward.probs) << "\n";
      break;
    case RewardFamily::Kind::Explicit:
      out << "values = " << fmt_list(cfg.reward.values) << "\n";
      break;
    default:
      break;
  }
  out << "\n[run]\n";
  out << "seed = " << cfg.run.seed << "\n";
  out << "tie_break = "
      << (cfg.run.tie_break == TieBreak::ById ? "id" : "random") << "\n";
  out << "overtake_eps = " << fmt(cfg.run.overtake_eps) << "\n";
  out << "precision = " << cfg.run.precision << "\n";
  return out.str();
}

}  // namespace rankcontest
