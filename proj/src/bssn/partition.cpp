#include <vector>

#include "wai/bssn/operators.hpp"

namespace wai {

namespace {

struct Node {
  Box box;
  std::size_t depth = 0;
  std::vector<Sample> samples;
};

// True while every real side is above the minimum box size.
bool above_min_size(const Box& box, const VariableSpace& space, const Box& domain, double fraction) {
  for (std::size_t d = 0; d < box.dim(); ++d) {
    if (space[d].kind != VarKind::Real || domain[d].width() <= 0.0) continue;
    if (box[d].width() <= fraction * domain[d].width()) return false;
  }
  return true;
}

}  // namespace

PartitionResult partition(const Cluster& parent, Prober& prober, const BssnParams& params, Rng& rng, int t,
                          std::span<const Sample> known) {
  PartitionResult out;
  const auto& space = *prober.input_space();
  const Box domain = space.bounds();

  auto emit = [&](Node& n, bool settled) {
    const auto est = purity_from_counts(count_labels(n.samples), params.risk_ratio);
    Cluster c;
    c.space = SpaceTag::Input;
    c.box = n.box;
    c.label = est.label;
    c.confidence = est.bound;
    c.support = n.samples.size();
    c.born_t = c.last_confirmed_t = t;
    c.unsettled = !settled;
    out.leaves.push_back(std::move(c));
    out.evidence.push_back(std::move(n.samples));
  };

  Node root{parent.box, 0, {}};
  for (const auto& s : known)
    if (parent.box.contains(s.x)) root.samples.push_back(s);
  std::vector<Node> stack;
  stack.push_back(std::move(root));

  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    if (out.budget_exhausted) {
      emit(node, false);
      continue;
    }
    const std::size_t have = node.samples.size();
    const std::size_t need = params.confidence_samples > have ? params.confidence_samples - have : 0;
    if (out.probes + need > params.partition_budget) {
      out.budget_exhausted = true;
      emit(node, false);
      continue;
    }
    for (std::size_t i = 0; i < need; ++i)
      node.samples.push_back(prober.probe(sample_point(space, node.box, rng), ProbeKind::Partition));
    out.probes += need;

    const auto est = purity_from_counts(count_labels(node.samples), params.risk_ratio);
    if (est.bound >= params.epsilon) {
      emit(node, true);
      continue;
    }
    const auto cut = node.depth < params.max_partition_depth &&
                             above_min_size(node.box, space, domain, params.min_box_fraction)
                         ? bisect(node.box, space)
                         : std::nullopt;
    if (!cut) {
      emit(node, false);
      continue;
    }
    Node lo{cut->lower, node.depth + 1, {}}, hi{cut->upper, node.depth + 1, {}};
    for (auto& s : node.samples) (s.x[cut->dim] <= cut->cut ? lo : hi).samples.push_back(std::move(s));
    // Lower half first.
    stack.push_back(std::move(hi));
    stack.push_back(std::move(lo));
  }
  return out;
}

}  // namespace wai
