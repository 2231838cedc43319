#include "wai/campaign/campaign.hpp"

#include <chrono>
#include <fstream>
#include <future>
#include <sstream>

#include <fmt/format.h>

#include "wai/bssn/agent.hpp"
#include "wai/constraint/parser.hpp"

namespace wai {

using nlohmann::json;

namespace {

struct World {
  std::optional<Scenario> scenario;
  std::shared_ptr<const ConstraintSystem> checker;
  SutSpec sut;
  Box global;
};

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ConfigError(fmt::format("{}: cannot open", p.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

World build_world(const CampaignConfig& c) {
  World w;
  if (c.scenario == ScenarioKind::Figure2) {
    w.scenario = build_figure2_scenario(*c.seed);
    w.checker = w.scenario->constraints;
    // Without a learning round the SUT keeps its pre-learning behaviour throughout.
    const int trigger = c.learning_round.value_or(std::numeric_limits<int>::max());
    w.sut = w.scenario->learning_sut(trigger, c.fault_rate);
    w.global = w.scenario->input_box;
    return w;
  }
  try {
    w.checker = std::make_shared<const ConstraintSystem>(
        parse_constraint_system(read_file(c.constraints_path)));
  } catch (const ParseError& e) {
    throw ConfigError(fmt::format("{}: {}", c.constraints_path.string(), e.what()));
  }
  w.sut = sut_spec_from_json(read_file(c.sut_path));
  const auto probe = make_reference_sut(w.sut);
  if (!(probe->action_space() == w.checker->space()))
    throw ConfigError(fmt::format("{}: declared variables differ from the SUT's action space",
                                  c.constraints_path.string()));
  w.global = probe->input_space().bounds();
  return w;
}

// FNV-1a over the raw bytes of every input and action.
std::string digest_hash(const TestRound& r) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto eat = [&](const std::vector<double>& xs) {
    for (double x : xs) {
      const auto* b = reinterpret_cast<const unsigned char*>(&x);
      for (std::size_t i = 0; i < sizeof x; ++i) h = (h ^ b[i]) * 0x100000001b3ULL;
    }
  };
  for (const auto& s : r.samples) {
    eat(s.x);
    eat(s.v);
  }
  return fmt::format("{:016x}", h);
}

json label_counts(const LabelCounts& c) {
  json j = json::object();
  for (std::size_t k = 0; k < kCategoryCount; ++k) j[std::string(to_string(static_cast<Category>(k)))] = c[k];
  return j;
}

json cluster_list(const std::vector<Cluster>& cs) {
  json a = json::array();
  for (const auto& c : cs) a.push_back(to_json(c));
  return a;
}

class Trace {
 public:
  Trace(const std::filesystem::path& path, const VariableSpace& in, const VariableSpace& out, std::size_t agents)
      : buffers_(agents) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) throw std::runtime_error(fmt::format("{}: cannot open trace for writing", path.string()));
    std::string header = "t,agent,kind";
    for (const auto& v : in.variables()) header += "," + v.name;
    for (const auto& v : out.variables()) header += "," + v.name;
    file_ << header << ",category,psi,verdict\n";
    in_dim_ = in.size();
    out_dim_ = out.size();
    enabled_ = true;
  }

  [[nodiscard]] bool enabled() const { return enabled_; }

  ProbeSink sink(std::size_t agent) {
    if (!enabled_) return {};
    return [this, agent](int t, ProbeKind kind, const Sample& s) {
      row(agent, t, to_string(kind), s.x, s.fault ? nullptr : &s.v, to_string(s.category), s.psi, "");
    };
  }

  void gate(std::size_t agent, const GateEvent& e) {
    if (!enabled_) return;
    row(agent, e.t, "gate", e.input, e.action ? &*e.action : nullptr, to_string(e.classification.category),
        e.classification.psi, to_string(e.verdict));
  }

  /// Writes buffered rows in agent order.
  void flush() {
    for (auto& b : buffers_) {
      if (enabled_) file_ << b;
      b.clear();
    }
  }

  [[nodiscard]] std::uint64_t rows() const { return rows_; }

  void close(const std::filesystem::path& path) {
    if (!enabled_) return;
    file_.close();
    if (!file_) throw std::runtime_error(fmt::format("{}: error writing trace", path.string()));
  }

 private:
  void row(std::size_t agent, int t, std::string_view kind, const std::vector<double>& x, const std::vector<double>* v,
           std::string_view category, double psi, std::string_view verdict) {
    auto& b = buffers_[agent];
    b += fmt::format("{},{},{}", t, agent, kind);
    for (std::size_t i = 0; i < in_dim_; ++i) b += i < x.size() ? fmt::format(",{}", x[i]) : ",";
    for (std::size_t i = 0; i < out_dim_; ++i) b += v && i < v->size() ? fmt::format(",{}", (*v)[i]) : ",";
    b += fmt::format(",{},{},{}\n", category, psi, verdict);
    ++rows_;
  }

  std::ofstream file_;
  std::vector<std::string> buffers_;
  std::size_t in_dim_ = 0, out_dim_ = 0;
  bool enabled_ = false;
  std::atomic<std::uint64_t> rows_{0};
};

json header(const CampaignConfig& c, const World& w) {
  json h;
  h["scenario"] = c.scenario == ScenarioKind::Figure2 ? "figure2" : "custom";
  h["agents"] = c.agents;
  h["rounds"] = c.rounds;
  h["learning_round"] = c.learning_round ? json(*c.learning_round) : json(nullptr);
  h["seed"] = *c.seed;
  h["block_soft"] = c.block_soft;
  h["live_actions"] = c.live_actions;
  h["fault_rate"] = c.fault_rate;
  h["params"] = to_json(c.params);
  h["input_box"] = to_json(w.global);
  h["constraints"] = w.scenario ? w.scenario->constraint_text : read_file(c.constraints_path);
  if (c.scenario == ScenarioKind::Custom) h["sut"] = json::parse(read_file(c.sut_path));
  if (w.scenario) {
    json regions = json::array();
    for (const auto& r : w.scenario->regions)
      regions.push_back({{"name", std::string(1, r.name)},
                         {"box", to_json(r.box)},
                         {"in_sg", r.in_sg},
                         {"in_sh", r.in_sh},
                         {"in_sb", r.in_sb},
                         {"in_sa", r.in_sa}});
    h["regions"] = regions;
    h["action_box"] = to_json(w.scenario->action_box);
    h["pre_order"] = std::string(w.scenario->pre_order.begin(), w.scenario->pre_order.end());
    h["post_order"] = std::string(w.scenario->post_order.begin(), w.scenario->post_order.end());
  }
  return h;
}

}  // namespace

json to_json(const Box& b) {
  json a = json::array();
  for (const auto& iv : b.intervals()) a.push_back({iv.lo, iv.hi});
  return a;
}

Box box_from_json(const json& j) {
  std::vector<Interval> dims;
  for (const auto& d : j) dims.push_back({d.at(0).get<double>(), d.at(1).get<double>()});
  return Box(std::move(dims));
}

json to_json(const Cluster& c) {
  return {{"space", std::string(to_string(c.space))},
          {"box", to_json(c.box)},
          {"label", std::string(to_string(c.label))},
          {"confidence", c.confidence},
          {"support", c.support},
          {"born_t", c.born_t},
          {"last_confirmed_t", c.last_confirmed_t},
          {"stale", c.stale}};
}

Cluster cluster_from_json(const json& j) {
  Cluster c;
  c.space = j.at("space").get<std::string>() == "action" ? SpaceTag::Action : SpaceTag::Input;
  c.box = box_from_json(j.at("box"));
  const auto label = category_from_string(j.at("label").get<std::string>());
  if (!label) throw std::invalid_argument("cluster label '" + j.at("label").get<std::string>() + "'");
  c.label = *label;
  c.confidence = j.at("confidence").get<double>();
  c.support = j.at("support").get<std::size_t>();
  c.born_t = j.at("born_t").get<int>();
  c.last_confirmed_t = j.at("last_confirmed_t").get<int>();
  c.stale = j.at("stale").get<bool>();
  return c;
}

json to_json(const ScoreCard& s) {
  return {{"recall_hprime", s.recall_hprime},
          {"precision_hprime", s.precision_hprime},
          {"recall_hsprime", s.recall_hsprime},
          {"precision_hsprime", s.precision_hsprime},
          {"lost_capacity_detected", s.lost_capacity_detected},
          {"new_violation_latency", s.new_violation_latency ? json(*s.new_violation_latency) : json(nullptr)},
          {"g_coverage", s.g_coverage}};
}

json to_json(const BssnParams& p) {
  return {{"epsilon", p.epsilon},
          {"round_budget", p.round_budget},
          {"inversion_budget", p.inversion_budget},
          {"max_partition_depth", p.max_partition_depth},
          {"min_box_fraction", p.min_box_fraction},
          {"explore_temperature", p.explore_temperature},
          {"risk_ratio", p.risk_ratio},
          {"staleness_window", p.staleness_window},
          {"confidence_samples", p.confidence_samples},
          {"partition_budget", p.partition_budget}};
}

json to_json(const PerformanceIndicators& i) {
  return {{"settled_volume", i.settled_volume},
          {"h_prime_volume", i.h_prime_volume},
          {"purity_mean", i.purity_mean},
          {"inversion_success_rate", i.inversion_success_rate},
          {"compute_spend", i.compute_spend},
          {"gate_blocks", i.gate_blocks},
          {"stagnation", i.stagnation}};
}

std::string canonical_json(const json& doc) { return doc.dump(2) + "\n"; }

void emit_report(const CampaignReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("{}: cannot open report for writing", path.string()));
  out << canonical_json(report.doc);
  out.close();
  if (!out) throw std::runtime_error(fmt::format("{}: error writing report", path.string()));
}

CampaignReport run_campaign(const CampaignConfig& config) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  const World world = build_world(config);
  const std::uint64_t seed = *config.seed;
  const std::size_t n = config.agents;

  std::vector<std::unique_ptr<BssnAgent>> agents;
  for (std::size_t i = 0; i < n; ++i) {
    SutSpec spec = world.sut;
    spec.seed = derive_seed(seed, {1, i});
    agents.push_back(std::make_unique<BssnAgent>(i, make_reference_sut(spec), world.checker, config.params,
                                                 derive_seed(seed, {2, i}), config.block_soft));
  }
  const Shepherd shepherd(std::vector<BssnParams>(n, config.params), config.shepherd);
  Trace trace(config.trace_path, agents[0]->sut().input_space(), agents[0]->sut().action_space(), n);
  for (auto& a : agents) a->prober().set_sink(trace.sink(a->id()));

  CampaignReport rep;
  rep.doc["header"] = header(config, world);
  rep.doc["rounds"] = json::array();

  std::vector<Cluster> input_map, action_map;
  RegionAssignment regions = assign_regions(n, world.global);
  std::vector<PerformanceIndicators> indicators(n);
  std::vector<double> last_hprime(n, 0.0);
  std::vector<int> stagnation(n, 0);
  const std::optional<int> learn = config.learning_round;
  const int pre_last = std::min(learn.value_or(config.rounds), config.rounds) - 1;
  std::optional<int> latency;

  for (int t = 0; t < config.rounds; ++t) {
    if (t > 0) regions = assign_regions(n, world.global, indicators, &regions);
    std::vector<std::uint64_t> spend_before(n), blocks_before(n);
    for (std::size_t i = 0; i < n; ++i) {
      agents[i]->sut().begin_round(t);
      agents[i]->prober().set_round(t);
      spend_before[i] = agents[i]->prober().total();
      blocks_before[i] = agents[i]->gate().blocked();
    }

    // Agents own disjoint state, so their rounds run concurrently.
    std::vector<std::future<ExploreResult>> jobs;
    for (std::size_t i = 0; i < n; ++i)
      jobs.push_back(std::async(std::launch::async, [&, i] { return agents[i]->explore(regions.boxes[i], t); }));
    std::vector<ExploreResult> results;
    for (auto& j : jobs) results.push_back(j.get());
    trace.flush();

    std::vector<Sample> evidence;
    std::vector<Cluster> current;
    for (std::size_t i = 0; i < n; ++i) {
      evidence.insert(evidence.end(), results[i].evidence.begin(), results[i].evidence.end());
      for (const auto& leaf : results[i].leaves)
        if (!leaf.unsettled && leaf.confidence >= agents[i]->params().epsilon) current.push_back(leaf);
    }

    // Map bookkeeping runs on one agent's handle, rotating each round.
    auto& keeper = *agents[static_cast<std::size_t>(t) % n];
    const auto& kp = keeper.params();
    Rng rec_rng = keeper.stream(t, Stream::Reconfirm);
    Rng adapt_rng = keeper.stream(t, Stream::Adapt);
    AdaptStats in_stats, act_stats;
    const auto in_rec = reconfirm(input_map, current, evidence, keeper.prober(), kp, rec_rng, t);
    input_map = adapt(input_map, current, keeper.prober(), kp, adapt_rng, t, &in_stats);
    const auto fresh_actions = derive_action_clusters(input_map, evidence, kp, t);
    const auto act_rec = reconfirm(action_map, fresh_actions, evidence, keeper.prober(), kp, rec_rng, t);
    action_map = adapt(action_map, fresh_actions, keeper.prober(), kp, adapt_rng, t, &act_stats);
    rep.totals.inversions += act_rec.inversions;
    rep.totals.inversion_successes += act_rec.inversion_successes;
    trace.flush();

    // Live traffic through each agent's gate.
    std::vector<std::uint64_t> released(n, 0), blocked(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      Rng live = agents[i]->stream(t, Stream::Live);
      const auto& space = agents[i]->sut().input_space_ptr();
      for (std::size_t k = 0; k < config.live_actions; ++k) {
        const auto out = agents[i]->gatekeep(Assignment(space, sample_point(*space, regions.boxes[i], live)), t);
        (out.verdict == Verdict::Released ? released : blocked)[i]++;
        trace.gate(i, agents[i]->gate().log()[out.event]);
      }
    }
    trace.flush();

    std::vector<BssnParams> before;
    json agent_records = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      auto& ind = indicators[i];
      const auto& r = results[i];
      ind.settled_volume = r.settled_volume;
      ind.h_prime_volume = r.h_prime_volume;
      ind.purity_mean = r.purity_mean;
      ind.inversion_success_rate = 1.0;
      if (&keeper == agents[i].get() && act_rec.inversions > 0)
        ind.inversion_success_rate =
            static_cast<double>(act_rec.inversion_successes) / static_cast<double>(act_rec.inversions);
      ind.compute_spend = agents[i]->prober().total() - spend_before[i];
      ind.gate_blocks = agents[i]->gate().blocked() - blocks_before[i];
      stagnation[i] = r.h_prime_volume > last_hprime[i] ? 0 : stagnation[i] + 1;
      last_hprime[i] = r.h_prime_volume;
      ind.stagnation = stagnation[i];
      before.push_back(agents[i]->params());

      std::size_t settled = 0;
      for (const auto& leaf : r.leaves) settled += !leaf.unsettled;
      agent_records.push_back({{"agent", i},
                               {"round", {{"size", r.round.size()},
                                          {"fault", r.round.fault ? json(*r.round.fault) : json(nullptr)},
                                          {"labels", label_counts(count_labels(r.round.samples))},
                                          {"hash", digest_hash(r.round)}}},
                               {"focus_probes", label_counts(r.focus_probes)},
                               {"partition_probes", r.partition_probes},
                               {"partition_budget_exhausted", r.budget_exhausted},
                               {"leaves_settled", settled},
                               {"leaves_unsettled", r.leaves.size() - settled},
                               {"gate", {{"released", released[i]}, {"blocked", blocked[i]}}}});
    }
    const auto inf = shepherd.influence(before, indicators);
    for (std::size_t i = 0; i < n; ++i) agents[i]->set_params(inf.params[i]);

    json shep;
    shep["t"] = t;
    shep["params"] = json::array();
    shep["indicators"] = json::array();
    shep["fired"] = json::array();
    shep["next"] = json::array();
    shep["regions"] = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      shep["params"].push_back(to_json(before[i]));
      shep["indicators"].push_back(to_json(indicators[i]));
      json fired = json::array();
      for (auto rule : inf.fired[i]) fired.push_back(std::string(to_string(rule)));
      shep["fired"].push_back(fired);
      shep["next"].push_back(to_json(inf.params[i]));
      shep["regions"].push_back(to_json(regions.boxes[i]));
    }

    json scores = json::object();
    if (world.scenario) {
      std::vector<Cluster> all = input_map;
      all.insert(all.end(), action_map.begin(), action_map.end());
      if (t == pre_last) {
        rep.pre = score(all, *world.scenario, Epoch::Pre);
        scores["pre"] = to_json(*rep.pre);
      }
      if (learn && t >= *learn) {
        if (!latency && new_violation_found(all, *world.scenario, *learn)) latency = t - *learn;
        if (!rep.lost_capacity_round && lost_capacity_detected(all, *world.scenario)) rep.lost_capacity_round = t;
        if (t == config.rounds - 1) {
          rep.post = score(all, *world.scenario, Epoch::Post, *learn);
          rep.post->new_violation_latency = latency;
          scores["post"] = to_json(*rep.post);
        }
      }
    }

    rep.doc["rounds"].push_back({{"t", t},
                                 {"epoch", learn && t >= *learn ? "post" : "pre"},
                                 {"keeper", keeper.id()},
                                 {"agents", agent_records},
                                 {"reconfirm",
                                  {{"input", {{"by_observation", in_rec.by_observation}, {"by_estimate", in_rec.by_estimate}}},
                                   {"action",
                                    {{"by_observation", act_rec.by_observation},
                                     {"inversions", act_rec.inversions},
                                     {"inversion_successes", act_rec.inversion_successes}}}}},
                                 {"adapt",
                                  {{"input", {{"merged", in_stats.merged}, {"absorbed", in_stats.absorbed}, {"carried", in_stats.carried}, {"stale", in_stats.stale}}},
                                   {"action", {{"merged", act_stats.merged}, {"absorbed", act_stats.absorbed}, {"carried", act_stats.carried}, {"stale", act_stats.stale}}}}},
                                 {"clusters", {{"input", cluster_list(input_map)}, {"action", cluster_list(action_map)}}},
                                 {"shepherd", shep},
                                 {"scores", scores}});
  }

  // Shut every gate, then keep proposing: nothing may get through.
  for (std::size_t i = 0; i < n; ++i) {
    auto& a = *agents[i];
    shutdown(a.sut(), a.gate());
    rep.shutdown_at.push_back(a.gate().log().size());
    Rng live = a.stream(config.rounds, Stream::Live);
    const auto& space = a.sut().input_space_ptr();
    const auto& box = regions.boxes[i];
    for (std::size_t k = 0; k < config.live_actions; ++k) {
      const auto out = a.gatekeep(Assignment(space, sample_point(*space, box, live)), config.rounds);
      trace.gate(i, a.gate().log()[out.event]);
    }
  }
  trace.flush();

  auto& tot = rep.totals;
  for (std::size_t i = 0; i < n; ++i) {
    auto& a = *agents[i];
    for (std::size_t k = 0; k < kProbeKindCount; ++k) tot.by_kind[k] += a.prober().count(static_cast<ProbeKind>(k));
    tot.probes += a.prober().total();
    tot.sut_probes += a.sut().probe_count();
    tot.released += a.gate().released();
    tot.blocked += a.gate().blocked();
    rep.gate_latency_ns += a.gate().latency_ns();
    const auto& log = a.gate().log();
    for (std::size_t e = 0; e < log.size(); ++e) {
      if (log[e].verdict != Verdict::Released) continue;
      tot.released_hprime += log[e].classification.category == Category::HPrime;
      tot.released_after_shutdown += e >= rep.shutdown_at[i];
    }
    rep.gate_logs.push_back(log);
  }
  tot.trace_rows = trace.rows();

  json by_kind = json::object();
  for (std::size_t k = 0; k < kProbeKindCount; ++k) by_kind[std::string(to_string(static_cast<ProbeKind>(k)))] = tot.by_kind[k];
  rep.doc["totals"] = {{"probes", tot.probes},
                       {"probes_by_kind", by_kind},
                       {"sut_probes", tot.sut_probes},
                       {"inversions", tot.inversions},
                       {"inversion_successes", tot.inversion_successes},
                       {"released", tot.released},
                       {"blocked", tot.blocked},
                       {"gate_events", tot.released + tot.blocked},
                       {"released_hprime", tot.released_hprime},
                       {"released_after_shutdown", tot.released_after_shutdown}};
  json final_scores = json::object();
  final_scores["pre"] = rep.pre ? to_json(*rep.pre) : json(nullptr);
  final_scores["post"] = rep.post ? to_json(*rep.post) : json(nullptr);
  final_scores["lost_capacity_round"] = rep.lost_capacity_round ? json(*rep.lost_capacity_round) : json(nullptr);
  rep.doc["scores"] = final_scores;

  if (!config.report_path.empty()) emit_report(rep, config.report_path);
  trace.close(config.trace_path);
  rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return rep;
}

json cluster_map_at(const json& doc, int t) {
  for (const auto& r : doc.at("rounds"))
    if (r.at("t").get<int>() == t) return r.at("clusters");
  throw std::out_of_range(fmt::format("report has no round {}", t));
}

Rescore rescore_report(const json& doc) {
  Rescore out;
  const auto& h = doc.at("header");
  if (h.at("scenario").get<std::string>() != "figure2") return out;
  const auto s = build_figure2_scenario(h.at("seed").get<std::uint64_t>());
  const int rounds = static_cast<int>(doc.at("rounds").size());
  const std::optional<int> learn =
      h.at("learning_round").is_null() ? std::nullopt : std::optional<int>(h.at("learning_round").get<int>());
  auto map_of = [&](int t) {
    std::vector<Cluster> cs;
    const auto m = cluster_map_at(doc, t);
    for (const auto& c : m.at("input")) cs.push_back(cluster_from_json(c));
    for (const auto& c : m.at("action")) cs.push_back(cluster_from_json(c));
    return cs;
  };
  const int pre_last = std::min(learn.value_or(rounds), rounds) - 1;
  if (pre_last >= 0) out.pre = score(map_of(pre_last), s, Epoch::Pre);
  if (learn && *learn < rounds) {
    out.post = score(map_of(rounds - 1), s, Epoch::Post, *learn);
    for (int t = *learn; t < rounds; ++t) {
      if (new_violation_found(map_of(t), s, *learn)) {
        out.post->new_violation_latency = t - *learn;
        break;
      }
    }
  }
  return out;
}

std::vector<Threshold> check_thresholds(const CampaignReport& r, int staleness_window) {
  std::vector<Threshold> out;
  auto add = [&](std::string name, bool ok, std::string detail) { out.push_back({std::move(name), ok, std::move(detail)}); };
  if (r.pre) {
    add("pre recall H' >= 0.90", r.pre->recall_hprime >= 0.90, fmt::format("{:.4f}", r.pre->recall_hprime));
    add("pre precision H' >= 0.85", r.pre->precision_hprime >= 0.85, fmt::format("{:.4f}", r.pre->precision_hprime));
    add("pre recall HS' >= 0.75", r.pre->recall_hsprime >= 0.75, fmt::format("{:.4f}", r.pre->recall_hsprime));
  } else if (r.doc.at("header").at("scenario") == "figure2") {
    add("pre-epoch score present", false, "no pre-epoch rounds");
  }
  if (r.post) {
    const auto lat = r.post->new_violation_latency;
    add("new violation latency <= 3", lat && *lat <= 3, lat ? fmt::format("{}", *lat) : "never");
    const int learn = r.doc.at("header").at("learning_round").get<int>();
    const auto lost = r.lost_capacity_round;
    add(fmt::format("vacated clusters stale within {} rounds", staleness_window),
        lost && *lost - learn < staleness_window, lost ? fmt::format("round {}", *lost) : "never");
    add("G covered by HS clusters (>= 0.5)", r.post->g_coverage >= 0.5, fmt::format("{:.4f}", r.post->g_coverage));
  }
  add("no released H' action", r.totals.released_hprime == 0, fmt::format("{}", r.totals.released_hprime));
  add("nothing released after shutdown", r.totals.released_after_shutdown == 0,
      fmt::format("{}", r.totals.released_after_shutdown));
  return out;
}

}  // namespace wai
