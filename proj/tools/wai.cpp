#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "wai/campaign/campaign.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kThresholdFailure = 2;

nlohmann::json read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw wai::ConfigError(fmt::format("{}: cannot open", path));
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw wai::ConfigError(fmt::format("{}: {}", path, e.what()));
  }
}

void print_card(std::string_view epoch, const wai::ScoreCard& s) {
  fmt::print("{}: recall_H'={:.4f} precision_H'={:.4f} recall_HS'={:.4f} precision_HS'={:.4f}", epoch,
             s.recall_hprime, s.precision_hprime, s.recall_hsprime, s.precision_hsprime);
  if (epoch == "post")
    fmt::print(" latency={} lost_capacity={} g_coverage={:.4f}",
               s.new_violation_latency ? std::to_string(*s.new_violation_latency) : "never",
               s.lost_capacity_detected, s.g_coverage);
  fmt::print("\n");
}

int run(const std::string& path, bool check) {
  const auto config = wai::load_campaign_config(path);
  const auto report = wai::run_campaign(config);
  if (report.pre) print_card("pre", *report.pre);
  if (report.post) print_card("post", *report.post);
  const auto& t = report.totals;
  fmt::print("probes={} inversions={}/{} released={} blocked={} runtime={:.2f}s gate_latency_mean={:.0f}ns\n",
             t.probes, t.inversion_successes, t.inversions, t.released, t.blocked, report.runtime_seconds,
             t.released + t.blocked ? static_cast<double>(report.gate_latency_ns) / (t.released + t.blocked) : 0.0);
  if (!check) return kOk;
  bool ok = true;
  for (const auto& th : wai::check_thresholds(report, config.params.staleness_window)) {
    fmt::print("{} {} ({})\n", th.ok ? "PASS" : "FAIL", th.name, th.detail);
    ok = ok && th.ok;
  }
  return ok ? kOk : kThresholdFailure;
}

int score(const std::string& path) {
  const auto doc = read_report(path);
  const auto r = wai::rescore_report(doc);
  if (!r.pre && !r.post) {
    fmt::print("no oracle for scenario '{}'\n", doc.at("header").at("scenario").get<std::string>());
    return kOk;
  }
  if (r.pre) print_card("pre", *r.pre);
  if (r.post) print_card("post", *r.post);
  return kOk;
}

int replay(const std::string& path, int round) {
  const auto doc = read_report(path);
  nlohmann::json out = {{"t", round}, {"clusters", wai::cluster_map_at(doc, round)}};
  std::cout << wai::canonical_json(out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"What-if analysis campaigns"};
  app.require_subcommand(1);

  std::string config_path, report_path;
  bool check = false;
  int round = 0;
  auto* run_cmd = app.add_subcommand("run", "run a campaign from a config file");
  run_cmd->add_option("config", config_path)->required();
  run_cmd->add_flag("--check", check, "exit 2 when an acceptance threshold is missed");
  auto* score_cmd = app.add_subcommand("score", "re-score a report against the scenario oracle");
  score_cmd->add_option("report", report_path)->required();
  auto* replay_cmd = app.add_subcommand("replay", "print the cluster map of one round");
  replay_cmd->add_option("report", report_path)->required();
  replay_cmd->add_option("--round", round)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    if (*run_cmd) return run(config_path, check);
    if (*score_cmd) return score(report_path);
    return replay(report_path, round);
  } catch (const wai::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kConfigError;
  }
}
