#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "wai/bssn/types.hpp"
#include "wai/shepherd/shepherd.hpp"
#include "wai/sut/reference.hpp"

namespace wai {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat view of a TOML-style file: "section.key" -> scalar. Supports
/// [section] headers, # comments, quoted strings, integers, floats and booleans.
using ConfigValue = std::variant<bool, std::int64_t, double, std::string>;
using ConfigTable = std::map<std::string, ConfigValue>;

/// Throws ConfigError naming the line on malformed input or a repeated key.
ConfigTable parse_config_table(const std::string& text);

enum class ScenarioKind { Figure2, Custom };

struct CampaignConfig {
  ScenarioKind scenario = ScenarioKind::Figure2;
  std::filesystem::path constraints_path;  // custom only
  std::filesystem::path sut_path;          // custom only, JSON SutSpec
  std::size_t agents = 3;
  int rounds = 10;
  std::optional<int> learning_round;  // first round after the SUT's learning cycle
  std::optional<std::uint64_t> seed;  // mandatory; optional only so a missing seed can be reported
  std::filesystem::path report_path;
  std::filesystem::path trace_path;   // empty: no trace
  bool block_soft = false;
  std::size_t live_actions = 10;      // gate proposals per agent per round, and again after shutdown
  double fault_rate = 0.0;            // figure2 SUT fault probability
  BssnParams params;
  ShepherdConfig shepherd;

  /// Throws ConfigError on the first invalid field.
  void validate() const;
};

/// Relative paths in the file resolve against `base_dir`.
CampaignConfig parse_campaign_config(const std::string& text, const std::filesystem::path& base_dir = {});
CampaignConfig load_campaign_config(const std::filesystem::path& path);

/// SutSpec from its JSON form ({"kind": "linear", "input_box": [[lo, hi], ...], ...}).
SutSpec sut_spec_from_json(const std::string& text);

}  // namespace wai
