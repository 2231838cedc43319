#include "wai/campaign/config.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"

namespace wai {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// Strips a trailing comment that is not inside a string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

ConfigValue parse_scalar(const std::string& raw, std::size_t line) {
  if (raw.empty()) throw ConfigError(fmt::format("line {}: missing value", line));
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') throw ConfigError(fmt::format("line {}: unterminated string", line));
    std::string out;
    for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
      if (raw[i] == '\\' && i + 2 < raw.size()) ++i;
      out += raw[i];
    }
    return out;
  }
  if (raw == "true") return true;
  if (raw == "false") return false;
  std::string digits;
  for (char c : raw)
    if (c != '_') digits += c;
  std::size_t used = 0;
  try {
    if (digits.find_first_of(".eE") == std::string::npos || digits.starts_with("0x")) {
      const auto v = std::stoll(digits, &used, 0);
      if (used == digits.size()) return static_cast<std::int64_t>(v);
    } else {
      const auto v = std::stod(digits, &used);
      if (used == digits.size()) return v;
    }
  } catch (const std::exception&) {
  }
  throw ConfigError(fmt::format("line {}: cannot read value '{}'", line, raw));
}

class Reader {
 public:
  explicit Reader(ConfigTable t) : table_(std::move(t)) {}

  template <class T>
  std::optional<T> take(const std::string& key) {
    auto it = table_.find(key);
    if (it == table_.end()) return std::nullopt;
    ConfigValue v = it->second;
    table_.erase(it);
    if constexpr (std::is_same_v<T, bool> || std::is_same_v<T, std::string>) {
      if (auto* p = std::get_if<T>(&v)) return *p;
    } else if constexpr (std::is_floating_point_v<T>) {
      if (auto* p = std::get_if<double>(&v)) return *p;
      if (auto* p = std::get_if<std::int64_t>(&v)) return static_cast<double>(*p);
    } else {
      if (auto* p = std::get_if<std::int64_t>(&v)) {
        if (*p < 0 && std::is_unsigned_v<T>) throw ConfigError(fmt::format("{}: must not be negative", key));
        return static_cast<T>(*p);
      }
    }
    throw ConfigError(fmt::format("{}: wrong value type", key));
  }

  void finish() const {
    if (!table_.empty()) throw ConfigError(fmt::format("unknown key '{}'", table_.begin()->first));
  }

 private:
  ConfigTable table_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

Box box_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(fmt::format("SUT {}: expected [[lo, hi], ...]", what));
  std::vector<Interval> dims;
  for (const auto& d : j) {
    if (!d.is_array() || d.size() != 2) throw ConfigError(fmt::format("SUT {}: each dimension is [lo, hi]", what));
    dims.push_back({d[0].get<double>(), d[1].get<double>()});
  }
  return Box(std::move(dims));
}

SutSpec spec_from(const nlohmann::json& j) {
  SutSpec s;
  const auto kind = sut_kind_from_string(j.at("kind").get<std::string>());
  if (!kind) throw ConfigError(fmt::format("SUT kind '{}' is not known", j.at("kind").get<std::string>()));
  s.kind = *kind;
  if (j.contains("input_box")) s.input_box = box_from_json(j.at("input_box"), "input_box");
  if (j.contains("action_box")) s.action_box = box_from_json(j.at("action_box"), "action_box");
  if (j.contains("A")) s.A = j.at("A").get<std::vector<std::vector<double>>>();
  if (j.contains("b")) s.b = j.at("b").get<std::vector<double>>();
  if (j.contains("cells"))
    for (const auto& c : j.at("cells")) s.cells.push_back({box_from_json(c.at("input"), "cell input"), box_from_json(c.at("output"), "cell output")});
  if (j.contains("memory_depth")) s.memory_depth = j.at("memory_depth").get<std::size_t>();
  if (j.contains("coupling")) s.coupling = j.at("coupling").get<double>();
  if (j.contains("pre")) s.pre = std::make_shared<const SutSpec>(spec_from(j.at("pre")));
  if (j.contains("post")) s.post = std::make_shared<const SutSpec>(spec_from(j.at("post")));
  if (j.contains("trigger_interactions")) s.trigger_interactions = j.at("trigger_interactions").get<std::uint64_t>();
  if (j.contains("trigger_round")) s.trigger_round = j.at("trigger_round").get<int>();
  if (j.contains("fault_rate")) s.fault_rate = j.at("fault_rate").get<double>();
  if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("input_names")) s.input_names = j.at("input_names").get<std::vector<std::string>>();
  if (j.contains("action_names")) s.action_names = j.at("action_names").get<std::vector<std::string>>();
  return s;
}

}  // namespace

ConfigTable parse_config_table(const std::string& text) {
  ConfigTable table;
  std::istringstream in(text);
  std::string raw, section;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3) throw ConfigError(fmt::format("line {}: malformed section header", line));
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("line {}: expected key = value", line));
    const auto key = trim(s.substr(0, eq));
    if (key.empty() || key.find_first_of(" \t\"") != std::string::npos)
      throw ConfigError(fmt::format("line {}: bad key '{}'", line, key));
    const auto full = section.empty() ? key : section + "." + key;
    if (!table.emplace(full, parse_scalar(trim(s.substr(eq + 1)), line)).second)
      throw ConfigError(fmt::format("line {}: '{}' given twice", line, full));
  }
  return table;
}

CampaignConfig parse_campaign_config(const std::string& text, const std::filesystem::path& base_dir) {
  Reader r(parse_config_table(text));
  CampaignConfig c;
  if (auto v = r.take<std::string>("scenario.kind")) {
    if (*v == "figure2")
      c.scenario = ScenarioKind::Figure2;
    else if (*v == "custom")
      c.scenario = ScenarioKind::Custom;
    else
      throw ConfigError(fmt::format("scenario.kind: '{}' is neither figure2 nor custom", *v));
  }
  if (auto v = r.take<std::string>("scenario.constraints")) c.constraints_path = resolve(base_dir, *v);
  if (auto v = r.take<std::string>("scenario.sut")) c.sut_path = resolve(base_dir, *v);
  if (auto v = r.take<double>("scenario.fault_rate")) c.fault_rate = *v;

  if (auto v = r.take<std::int64_t>("campaign.agents")) {
    if (*v <= 0) throw ConfigError("campaign.agents: must be positive");
    c.agents = static_cast<std::size_t>(*v);
  }
  if (auto v = r.take<std::int64_t>("campaign.rounds")) c.rounds = static_cast<int>(*v);
  if (auto v = r.take<std::int64_t>("campaign.learning_round")) c.learning_round = static_cast<int>(*v);
  if (auto v = r.take<std::int64_t>("campaign.seed")) c.seed = static_cast<std::uint64_t>(*v);
  if (auto v = r.take<std::string>("campaign.report")) c.report_path = resolve(base_dir, *v);
  if (auto v = r.take<std::string>("campaign.trace")) c.trace_path = resolve(base_dir, *v);
  if (auto v = r.take<bool>("campaign.block_soft")) c.block_soft = *v;
  if (auto v = r.take<std::int64_t>("campaign.live_actions")) {
    if (*v < 0) throw ConfigError("campaign.live_actions: must not be negative");
    c.live_actions = static_cast<std::size_t>(*v);
  }

  auto& p = c.params;
  if (auto v = r.take<double>("agent.epsilon")) p.epsilon = *v;
  if (auto v = r.take<std::size_t>("agent.round_budget")) p.round_budget = *v;
  if (auto v = r.take<std::size_t>("agent.inversion_budget")) p.inversion_budget = *v;
  if (auto v = r.take<std::size_t>("agent.max_partition_depth")) p.max_partition_depth = *v;
  if (auto v = r.take<double>("agent.min_box_fraction")) p.min_box_fraction = *v;
  if (auto v = r.take<double>("agent.explore_temperature")) p.explore_temperature = *v;
  if (auto v = r.take<double>("agent.risk_ratio")) p.risk_ratio = *v;
  if (auto v = r.take<std::int64_t>("agent.staleness_window")) p.staleness_window = static_cast<int>(*v);
  if (auto v = r.take<std::size_t>("agent.confidence_samples")) p.confidence_samples = *v;
  if (auto v = r.take<std::size_t>("agent.partition_budget")) p.partition_budget = *v;

  auto& s = c.shepherd;
  if (auto v = r.take<std::uint64_t>("shepherd.cost_threshold")) s.cost_threshold = *v;
  if (auto v = r.take<int>("shepherd.stagnation_limit")) s.stagnation_limit = *v;
  r.finish();
  c.validate();
  return c;
}

void CampaignConfig::validate() const {
  if (!seed) throw ConfigError("campaign.seed: required (runs are never seeded from the clock)");
  if (agents == 0) throw ConfigError("campaign.agents: must be positive");
  if (rounds < 0) throw ConfigError("campaign.rounds: must not be negative");
  if (learning_round && *learning_round < 0) throw ConfigError("campaign.learning_round: must not be negative");
  if (!(fault_rate >= 0.0 && fault_rate < 1.0)) throw ConfigError("scenario.fault_rate: must be in [0, 1)");
  if (scenario == ScenarioKind::Custom && (constraints_path.empty() || sut_path.empty()))
    throw ConfigError("scenario: custom scenarios need both 'constraints' and 'sut'");
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("agent: {}", e.what()));
  }
}

CampaignConfig load_campaign_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("{}: cannot open", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_campaign_config(ss.str(), path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

SutSpec sut_spec_from_json(const std::string& text) {
  try {
    auto s = spec_from(nlohmann::json::parse(text));
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("SUT spec: {}", e.what()));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("SUT spec: {}", e.what()));
  }
}

}  // namespace wai
