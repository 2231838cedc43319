#include "wai/bssn/agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace wai {

namespace {

// Share of focus probes per unit volume, by the label a box currently leans to.
constexpr double priority_weight(Category c) {
  switch (c) {
    case Category::HPrime: return 4.0;
    case Category::HSPrime: return 2.0;
    case Category::HS: return 1.0;
  }
  return 1.0;
}

// Volume with degenerate sides treated as unit width.
double effective_volume(const Box& b) {
  double v = 1.0;
  for (const auto& iv : b.intervals()) v *= iv.width() > 0.0 ? iv.width() : 1.0;
  return v;
}

}  // namespace

BssnAgent::BssnAgent(std::size_t id, std::unique_ptr<Sut> sut, std::shared_ptr<const ConstraintSystem> checker,
                     BssnParams params, std::uint64_t seed, bool block_soft)
    : id_(id),
      sut_(std::move(sut)),
      checker_(std::move(checker)),
      params_(params),
      seed_(seed),
      prober_(*sut_, *checker_),
      gate_(block_soft) {
  params_.validate();
}

void BssnAgent::set_params(const BssnParams& p) {
  p.validate();
  params_ = p;
}

Rng BssnAgent::stream(int t, Stream s) const {
  return Rng(derive_seed(seed_, {static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(s)}));
}

TestRound BssnAgent::run_round(const Box& region, int t) {
  TestRound round;
  round.t = t;
  last_focus_ = {};
  prober_.set_round(t);
  const auto& space = sut_->input_space();
  if (region.dim() != space.size()) throw std::invalid_argument("run_round: region arity differs from the input space");
  if (!space.bounds().contains(region)) throw std::invalid_argument("run_round: region outside the input space");
  Rng rng = stream(t, Stream::Round);

  struct Focus {
    Box box;
    Category label;
    std::size_t quota = 0;
  };
  std::vector<Focus> focus;
  for (const auto& c : unsettled_) {
    if (!c.box.overlaps(region)) continue;
    // Widen by a quarter of each side so draws straddle the box's faces.
    Box b = c.box.intersection(region);
    for (std::size_t d = 0; d < b.dim(); ++d) {
      const double pad = 0.25 * b[d].width();
      b[d] = {std::max(region[d].lo, b[d].lo - pad), std::min(region[d].hi, b[d].hi + pad)};
    }
    focus.push_back({std::move(b), c.label});
  }

  const std::size_t m = params_.round_budget;
  std::size_t uniform_n = m;
  if (!focus.empty()) {
    uniform_n = static_cast<std::size_t>(std::llround(params_.explore_temperature * static_cast<double>(m)));
    const std::size_t focus_n = m - uniform_n;
    // Largest-remainder apportionment keeps the split deterministic.
    std::vector<double> w(focus.size());
    double total = 0.0;
    for (std::size_t i = 0; i < focus.size(); ++i) total += w[i] = priority_weight(focus[i].label) * effective_volume(focus[i].box);
    std::vector<double> rem(focus.size());
    std::size_t given = 0;
    for (std::size_t i = 0; i < focus.size(); ++i) {
      const double exact = static_cast<double>(focus_n) * w[i] / total;
      focus[i].quota = static_cast<std::size_t>(std::floor(exact));
      rem[i] = exact - std::floor(exact);
      given += focus[i].quota;
    }
    std::vector<std::size_t> order(focus.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
    for (std::size_t k = 0; given < focus_n; ++k, ++given) ++focus[order[k % order.size()]].quota;
  }

  auto take = [&](const Box& box) {
    auto s = prober_.probe(sample_point(space, box, rng), ProbeKind::Round);
    if (s.fault) {
      round.fault = fmt::format("SUT fault at probe {} of round {}", round.samples.size() + 1, t);
      return false;
    }
    round.samples.push_back(std::move(s));
    return true;
  };
  for (std::size_t i = 0; i < uniform_n; ++i)
    if (!take(region)) return round;
  for (const auto& f : focus) {
    for (std::size_t i = 0; i < f.quota; ++i) {
      if (!take(f.box)) return round;
      ++last_focus_[static_cast<std::size_t>(f.label)];
    }
  }
  return round;
}

Box aligned_cover(const Box& region, const Box& box, const VariableSpace& space, std::size_t max_depth) {
  Box cur = region;
  for (std::size_t depth = 0; depth < max_depth; ++depth) {
    const auto b = bisect(cur, space);
    if (!b) break;
    if (box[b->dim].hi <= b->cut && b->lower.contains(box))
      cur = b->lower;
    else if (box[b->dim].lo > b->cut && b->upper.contains(box))
      cur = b->upper;
    else
      break;
  }
  return cur;
}

ExploreResult BssnAgent::explore(const Box& region, int t) {
  ExploreResult out;
  out.round = run_round(region, t);
  out.focus_probes = last_focus_;
  std::vector<Sample> pool = out.round.samples;

  auto compressed = compress_inputs(out.round);
  std::stable_sort(compressed.begin(), compressed.end(), [](const Cluster& a, const Cluster& b) {
    return severity_rank(a.label) > severity_rank(b.label);
  });
  Rng rng = stream(t, Stream::Partition);
  std::vector<Box> done;
  for (const auto& comp : compressed) {
    Cluster parent = comp;
    parent.box = aligned_cover(region, comp.box, sut_->input_space(), params_.max_partition_depth);
    if (std::any_of(done.begin(), done.end(), [&](const Box& b) { return b.contains(parent.box); })) continue;
    done.push_back(parent.box);
    auto res = partition(parent, prober_, params_, rng, t, pool);
    out.partition_probes += res.probes;
    out.budget_exhausted = out.budget_exhausted || res.budget_exhausted;
    std::vector<Sample> next;
    for (auto& s : pool)
      if (!parent.box.contains(s.x)) next.push_back(std::move(s));
    for (std::size_t i = 0; i < res.leaves.size(); ++i) {
      auto& leaf = res.leaves[i];
      const bool clash = std::any_of(out.leaves.begin(), out.leaves.end(),
                                     [&](const Cluster& k) { return k.box.overlaps(leaf.box); });
      if (!clash) out.leaves.push_back(std::move(leaf));
      for (auto& s : res.evidence[i]) next.push_back(std::move(s));
    }
    pool = std::move(next);
  }
  out.evidence = std::move(pool);

  const double region_volume = effective_volume(region);
  double purity = 0.0;
  std::size_t settled = 0;
  unsettled_.clear();
  for (const auto& leaf : out.leaves) {
    if (leaf.unsettled) {
      unsettled_.push_back(leaf);
      continue;
    }
    const double share = effective_volume(leaf.box) / region_volume;
    out.settled_volume += share;
    if (leaf.label == Category::HPrime) out.h_prime_volume += share;
    purity += leaf.confidence;
    ++settled;
  }
  out.settled_volume = std::min(1.0, out.settled_volume);
  out.h_prime_volume = std::min(1.0, out.h_prime_volume);
  out.purity_mean = settled ? purity / static_cast<double>(settled) : 0.0;
  return out;
}

GateOutcome BssnAgent::gatekeep(const Assignment& x, int t) { return act(*sut_, x, gate_, *checker_, t); }

}  // namespace wai
