#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wai/campaign/config.hpp"
#include "wai/scenario/figure2.hpp"
#include "wai/bssn/prober.hpp"
#include "wai/sut/gate.hpp"

namespace wai {

struct CampaignTotals {
  std::uint64_t probes = 0;                       // every what-if evaluation, all purposes
  std::array<std::uint64_t, kProbeKindCount> by_kind{};
  std::uint64_t sut_probes = 0;                   // as counted by the SUT handles themselves
  std::uint64_t inversions = 0;
  std::uint64_t inversion_successes = 0;
  std::uint64_t released = 0;
  std::uint64_t blocked = 0;
  std::uint64_t released_hprime = 0;              // must stay 0
  std::uint64_t released_after_shutdown = 0;      // must stay 0
  std::uint64_t trace_rows = 0;
};

struct CampaignReport {
  /// Canonical document: everything except wall-clock measurements.
  nlohmann::json doc;
  std::optional<ScoreCard> pre;
  std::optional<ScoreCard> post;
  std::optional<int> lost_capacity_round;  // first post round with every vacated cluster stale
  CampaignTotals totals;
  /// Per agent: full gate log and the index of the first event after shutdown.
  std::vector<std::vector<GateEvent>> gate_logs;
  std::vector<std::size_t> shutdown_at;
  double runtime_seconds = 0.0;
  std::uint64_t gate_latency_ns = 0;
};

/// Runs the round loop described by `config` and writes the report and trace
/// when paths are set. Throws ConfigError before any round when the scenario
/// cannot be built; SUT faults during rounds are recorded, never fatal.
CampaignReport run_campaign(const CampaignConfig& config);

/// Sorted keys, shortest round-trip floats, two-space indent, trailing newline.
std::string canonical_json(const nlohmann::json& doc);

/// Writes the canonical report; errors name the path.
void emit_report(const CampaignReport& report, const std::filesystem::path& path);

nlohmann::json to_json(const Cluster& c);
Cluster cluster_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScoreCard& s);
nlohmann::json to_json(const BssnParams& p);
nlohmann::json to_json(const PerformanceIndicators& i);
nlohmann::json to_json(const Box& b);
Box box_from_json(const nlohmann::json& j);

/// Re-scores the final cluster map stored in a figure2 report.
struct Rescore {
  std::optional<ScoreCard> pre;
  std::optional<ScoreCard> post;
};
Rescore rescore_report(const nlohmann::json& doc);

/// Cluster map recorded at round t (throws std::out_of_range when absent).
nlohmann::json cluster_map_at(const nlohmann::json& doc, int t);

struct Threshold {
  std::string name;
  bool ok = false;
  std::string detail;
};

/// Pinned discovery, adaptation and gate thresholds for a figure2 campaign.
std::vector<Threshold> check_thresholds(const CampaignReport& r, int staleness_window);

}  // namespace wai
