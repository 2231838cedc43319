#include "wai/scenario/figure2.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

#include "wai/constraint/parser.hpp"

namespace wai {

std::string_view to_string(Epoch e) { return e == Epoch::Pre ? "pre" : "post"; }

namespace {

constexpr std::string_view kSg = "ABCDEFG";
constexpr std::string_view kSh = "ABGFKMH";
constexpr std::string_view kSb = "BDFEIJK";
constexpr std::string_view kSa = "EFGJKLM";

bool has(std::string_view set, char c) { return set.find(c) != std::string_view::npos; }

std::string union_boxes(const std::vector<Region>& regions, std::string_view set) {
  std::string out;
  for (const auto& r : regions) {
    if (!has(set, r.name)) continue;
    if (!out.empty()) out += ", ";
    out += fmt::format("[{},{}]x[{},{}]", r.box[0].lo, r.box[0].hi, r.box[1].lo, r.box[1].hi);
  }
  return out;
}

SutSpec strip_map(const Scenario& s, const std::vector<char>& order) {
  SutSpec spec;
  spec.kind = SutKind::PiecewiseRugged;
  spec.input_box = s.input_box;
  spec.action_box = s.action_box;
  spec.seed = s.seed;
  const double w = s.input_box[0].width() / static_cast<double>(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    Box in = s.input_box;
    in[0] = {s.input_box[0].lo + w * static_cast<double>(k),
             k + 1 == order.size() ? s.input_box[0].hi : s.input_box[0].lo + w * static_cast<double>(k + 1)};
    spec.cells.push_back({in, s.region(order[k]).box});
  }
  return spec;
}

bool in_any(const std::vector<Box>& boxes, const double* p) {
  return std::any_of(boxes.begin(), boxes.end(), [&](const Box& b) { return b.contains(std::span<const double>(p, 2)); });
}

}  // namespace

const Region& Scenario::region(char name) const {
  for (const auto& r : regions)
    if (r.name == name) return r;
  throw std::out_of_range(fmt::format("no region '{}'", name));
}

SutSpec Scenario::learning_sut(int trigger_round, double fault_rate) const {
  SutSpec spec;
  spec.kind = SutKind::Learning;
  spec.input_box = input_box;
  spec.action_box = action_box;
  spec.pre = std::make_shared<const SutSpec>(sut_pre);
  spec.post = std::make_shared<const SutSpec>(sut_post);
  spec.trigger_round = trigger_round;
  spec.fault_rate = fault_rate;
  spec.seed = seed;
  return spec;
}

Scenario build_figure2_scenario(std::uint64_t seed) {
  Scenario s;
  s.seed = seed;
  s.input_box = Box{{0.0, 1.0}, {0.0, 1.0}};
  s.action_box = Box{{0.0, 10.0}, {0.0, 10.0}};
  // Scan-line layout: five unit cells per row with unit gaps.
  const std::string names = "ABCDEFGHIJKLM";
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double cx = 0.5 + 2.0 * static_cast<double>(i % 5);
    const double cy = 0.5 + 2.0 * static_cast<double>(i / 5);
    const char n = names[i];
    s.regions.push_back({n, Box{{cx - 0.5, cx + 0.5}, {cy - 0.5, cy + 0.5}}, has(kSg, n), has(kSh, n), has(kSb, n),
                         has(kSa, n)});
  }
  s.constraint_text = fmt::format(
      "var v0 : real 0..10\n"
      "var v1 : real 0..10\n"
      "nl hard dist_union(v0, v1; {}) <= 0\n"
      "nl soft dist_union(v0, v1; {}) <= 0\n",
      union_boxes(s.regions, kSg), union_boxes(s.regions, kSh));
  s.constraints = std::make_shared<const ConstraintSystem>(parse_constraint_system(s.constraint_text));
  // Neighbouring strips never share a label, so a pure input box stays inside one strip.
  s.pre_order = {'I', 'B', 'J', 'D', 'K', 'E', 'F'};
  s.post_order = {'J', 'E', 'K', 'F', 'L', 'G', 'M'};
  s.sut_pre = strip_map(s, s.pre_order);
  s.sut_post = strip_map(s, s.post_order);
  return s;
}

OracleLabel oracle_label(const Scenario& s, std::span<const double> v) {
  OracleLabel out;
  bool sg = false, sh = false;
  for (const auto& r : s.regions) {
    if (!r.box.contains(v)) continue;
    if (!out.region) out.region = r.name;
    sg = sg || r.in_sg;
    sh = sh || r.in_sh;
  }
  out.category = !sg ? Category::HPrime : (sh ? Category::HS : Category::HSPrime);
  return out;
}

std::vector<Box> push_through(const Scenario& s, Epoch e, const Box& input) {
  std::vector<Box> out;
  for (const auto& cell : s.sut(e).cells) {
    const Box part = input.intersection(cell.input);
    if (part.empty()) continue;
    bool thin = false;
    for (std::size_t d = 0; d < part.dim(); ++d) thin = thin || (part[d].width() <= 0.0 && cell.input[d].width() > 0.0);
    if (thin) continue;
    std::vector<double> lo(part.dim()), hi(part.dim());
    for (std::size_t d = 0; d < part.dim(); ++d) {
      lo[d] = part[d].lo;
      hi[d] = part[d].hi;
    }
    const auto a = map_through_cell(cell, lo), b = map_through_cell(cell, hi);
    std::vector<Interval> dims(a.size());
    for (std::size_t d = 0; d < a.size(); ++d) dims[d] = {std::min(a[d], b[d]), std::max(a[d], b[d])};
    out.emplace_back(std::move(dims));
  }
  return out;
}

namespace {

bool live(const Cluster& c, Epoch e, int post_from) {
  return !c.stale && !c.unsettled && (e == Epoch::Pre || c.last_confirmed_t >= post_from);
}

std::vector<Box> action_boxes(std::span<const Cluster> clusters, const Scenario& s, Epoch e, int post_from,
                              Category label) {
  std::vector<Box> out;
  for (const auto& c : clusters) {
    if (c.label != label || !live(c, e, post_from)) continue;
    if (c.space == SpaceTag::Action) {
      out.push_back(c.box);
    } else {
      auto pushed = push_through(s, e, c.box);
      out.insert(out.end(), pushed.begin(), pushed.end());
    }
  }
  return out;
}

}  // namespace

ScoreCard score(std::span<const Cluster> clusters, const Scenario& s, Epoch e, int post_from) {
  ScoreCard sc;
  const auto hp = action_boxes(clusters, s, e, post_from, Category::HPrime);
  const auto sp = action_boxes(clusters, s, e, post_from, Category::HSPrime);
  const auto ok = action_boxes(clusters, s, e, post_from, Category::HS);
  std::size_t true_hp = 0, hit_hp = 0, pred_hp = 0, right_hp = 0;
  std::size_t true_sp = 0, hit_sp = 0, pred_sp = 0, right_sp = 0;
  std::size_t g_total = 0, g_hit = 0;
  const double step0 = s.action_box[0].width() / kScoreGrid, step1 = s.action_box[1].width() / kScoreGrid;
  for (int i = 0; i < kScoreGrid; ++i) {
    for (int j = 0; j < kScoreGrid; ++j) {
      const double p[2] = {s.action_box[0].lo + (i + 0.5) * step0, s.action_box[1].lo + (j + 0.5) * step1};
      const auto truth = oracle_label(s, p);
      bool reachable = false;
      if (truth.region) {
        const auto& r = s.region(*truth.region);
        reachable = e == Epoch::Pre ? r.in_sb : r.in_sa;
      }
      const bool in_hp = in_any(hp, p), in_sp = in_any(sp, p);
      if (reachable && truth.category == Category::HPrime) {
        ++true_hp;
        hit_hp += in_hp;
      }
      if (reachable && truth.category == Category::HSPrime) {
        ++true_sp;
        hit_sp += in_sp;
      }
      if (in_hp) {
        ++pred_hp;
        right_hp += truth.category == Category::HPrime;
      }
      if (in_sp) {
        ++pred_sp;
        right_sp += truth.category == Category::HSPrime;
      }
      if (truth.region == 'G') {
        ++g_total;
        g_hit += in_any(ok, p);
      }
    }
  }
  auto ratio = [](std::size_t a, std::size_t b) { return b ? static_cast<double>(a) / static_cast<double>(b) : 0.0; };
  sc.recall_hprime = ratio(hit_hp, true_hp);
  sc.precision_hprime = ratio(right_hp, pred_hp);
  sc.recall_hsprime = ratio(hit_sp, true_sp);
  sc.precision_hsprime = ratio(right_sp, pred_sp);
  sc.g_coverage = ratio(g_hit, g_total);

  if (e == Epoch::Post) sc.lost_capacity_detected = lost_capacity_detected(clusters, s);
  return sc;
}

bool lost_capacity_detected(std::span<const Cluster> clusters, const Scenario& s) {
  bool any = false, all_stale = true;
  for (const auto& c : clusters) {
    if (c.space != SpaceTag::Action || c.unsettled) continue;
    for (const auto& r : s.regions) {
      if (!(r.in_sb && !r.in_sa) || !c.box.overlaps(r.box)) continue;
      any = true;
      all_stale = all_stale && c.stale;
    }
  }
  return any && all_stale;
}

bool new_violation_found(std::span<const Cluster> clusters, const Scenario& s, int post_from) {
  const Box& l = s.region('L').box;
  const Box& m = s.region('M').box;
  for (const auto& b : action_boxes(clusters, s, Epoch::Post, post_from, Category::HPrime))
    if (b.overlaps(l) || b.overlaps(m)) return true;
  return false;
}

}  // namespace wai
