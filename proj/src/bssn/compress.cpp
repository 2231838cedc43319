#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wai/bssn/operators.hpp"

namespace wai {

std::vector<double> sample_point(const VariableSpace& space, const Box& box, Rng& rng) {
  std::vector<double> x(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& var = space[i];
    const auto& iv = box[i];
    if (var.kind == VarKind::Real) {
      x[i] = iv.lo == iv.hi ? iv.lo : rng.uniform(iv.lo, iv.hi);
      continue;
    }
    if (var.allowed.empty()) {
      const auto lo = static_cast<std::int64_t>(std::ceil(iv.lo));
      const auto hi = static_cast<std::int64_t>(std::floor(iv.hi));
      x[i] = static_cast<double>(hi >= lo ? rng.uniform_int(lo, hi) : std::llround(iv.mid()));
      continue;
    }
    std::vector<std::int64_t> inside;
    for (auto a : var.allowed)
      if (iv.contains(static_cast<double>(a))) inside.push_back(a);
    if (inside.empty()) {
      // Box falls between enumerated values: take the closest one.
      auto best = var.allowed.front();
      for (auto a : var.allowed)
        if (std::fabs(static_cast<double>(a) - iv.mid()) < std::fabs(static_cast<double>(best) - iv.mid())) best = a;
      x[i] = static_cast<double>(best);
    } else {
      x[i] = static_cast<double>(inside[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(inside.size()) - 1))]);
    }
  }
  return x;
}

std::optional<Bisection> bisect(const Box& box, const VariableSpace& space) {
  const Box domain = space.bounds();
  std::optional<std::size_t> best;
  double best_score = 0.0;
  for (std::size_t d = 0; d < box.dim(); ++d) {
    const double span = domain[d].width();
    if (span <= 0.0) continue;
    const bool discrete = space[d].kind != VarKind::Real;
    const double w = box[d].width();
    if (discrete ? std::floor(box[d].hi) - std::ceil(box[d].lo) < 1.0 : w <= 0.0) continue;
    const double score = w / span;
    if (!best || score > best_score) {
      best = d;
      best_score = score;
    }
  }
  if (!best) return std::nullopt;
  Bisection b;
  b.dim = *best;
  b.lower = b.upper = box;
  if (space[b.dim].kind == VarKind::Real) {
    b.cut = box[b.dim].mid();
    b.lower[b.dim].hi = b.cut;
    b.upper[b.dim].lo = b.cut;
  } else {
    b.cut = std::floor(box[b.dim].mid());
    b.lower[b.dim].hi = b.cut;
    b.upper[b.dim].lo = b.cut + 1.0;
  }
  return b;
}

namespace {

std::vector<Cluster> compress(const TestRound& round, SpaceTag tag) {
  std::vector<Cluster> out;
  const bool actions = tag == SpaceTag::Action;
  for (std::size_t k = 0; k < kCategoryCount; ++k) {
    const auto label = static_cast<Category>(k);
    std::vector<std::vector<double>> pts;
    for (const auto& s : round.samples) {
      if (s.category != label || (actions && s.fault)) continue;
      pts.push_back(actions ? s.v : s.x);
    }
    if (pts.empty()) continue;
    Cluster c;
    c.space = tag;
    c.box = Box::bounding(pts);
    c.label = label;
    c.support = pts.size();
    c.born_t = c.last_confirmed_t = round.t;
    // Purity of the box counts every sample of the round that falls inside it.
    LabelCounts inside{};
    for (const auto& s : round.samples) {
      if (actions && s.fault) continue;
      if (c.box.contains(actions ? s.v : s.x)) ++inside[static_cast<std::size_t>(s.category)];
    }
    double n = 0.0;
    for (auto v : inside) n += static_cast<double>(v);
    if (label != Category::HPrime)
      n += (BssnParams{}.risk_ratio - 1.0) * static_cast<double>(inside[static_cast<std::size_t>(Category::HPrime)]);
    c.confidence = wilson_lower_bound(static_cast<double>(inside[k]), n);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

std::vector<Cluster> compress_inputs(const TestRound& round) { return compress(round, SpaceTag::Input); }
std::vector<Cluster> compress_actions(const TestRound& round) { return compress(round, SpaceTag::Action); }

ConfidenceResult estimate_confidence(const Box& box, Prober& prober, std::size_t n, Rng& rng, double risk_ratio) {
  ConfidenceResult r;
  const auto& space = *prober.input_space();
  r.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.samples.push_back(prober.probe(sample_point(space, box, rng), ProbeKind::Confidence));
    r.fault = r.fault || r.samples.back().fault;
  }
  r.estimate = purity_from_counts(count_labels(r.samples), risk_ratio);
  return r;
}

double estimate_confidence(const Cluster& cluster, Prober& prober, std::size_t n, Rng& rng, double risk_ratio) {
  if (cluster.space != SpaceTag::Input)
    throw std::invalid_argument("estimate_confidence: action-space clusters are confirmed through inversion");
  if (n == 0) throw std::invalid_argument("estimate_confidence: n must be at least 1");
  return estimate_confidence(cluster.box, prober, n, rng, risk_ratio).confidence();
}

std::vector<Cluster> derive_action_clusters(std::span<const Cluster> input_clusters, std::span<const Sample> evidence,
                                            const BssnParams& params, int t) {
  std::vector<Cluster> out;
  for (const auto& ic : input_clusters) {
    if (ic.space != SpaceTag::Input || ic.stale || ic.unsettled || ic.last_confirmed_t != t) continue;
    std::vector<std::vector<double>> pts;
    for (const auto& s : evidence)
      if (!s.fault && s.category == ic.label && ic.box.contains(s.x)) pts.push_back(s.v);
    if (pts.empty()) continue;
    Cluster c;
    c.space = SpaceTag::Action;
    c.box = Box::bounding(pts);
    c.label = ic.label;
    c.born_t = c.last_confirmed_t = t;
    LabelCounts inside{};
    for (const auto& s : evidence)
      if (!s.fault && c.box.contains(s.v)) ++inside[static_cast<std::size_t>(s.category)];
    const auto k = static_cast<std::size_t>(c.label);
    double n = 0.0;
    for (auto v : inside) n += static_cast<double>(v);
    if (c.label != Category::HPrime)
      n += (params.risk_ratio - 1.0) * static_cast<double>(inside[static_cast<std::size_t>(Category::HPrime)]);
    c.support = inside[k];
    c.confidence = wilson_lower_bound(static_cast<double>(inside[k]), n);
    if (c.confidence >= params.epsilon) out.push_back(std::move(c));
  }
  return out;
}

}  // namespace wai
