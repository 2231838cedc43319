#include <algorithm>
#include <numeric>

#include "wai/bssn/operators.hpp"

namespace wai {

namespace {

// Merge attempts per previous cluster; each input-space attempt costs a confidence estimate.
constexpr std::size_t kMergeAttempts = 3;

bool settled(const Cluster& c, double epsilon) { return !c.unsettled && !c.stale && c.confidence >= epsilon; }

// Purity bound of `hull` for `label` where only points inside `a` or `b` count
// as behaviour the SUT has been seen to produce. No SUT access.
double supported_purity(const Box& hull, const Box& a, const Box& b, Category label, const ConstraintSystem& checker,
                        const BssnParams& params, Rng& rng) {
  const auto& space = checker.space_ptr();
  double hits = 0.0, n = 0.0;
  for (std::size_t i = 0; i < params.confidence_samples; ++i) {
    const auto v = sample_point(*space, hull, rng);
    n += 1.0;
    if (!a.contains(v) && !b.contains(v)) continue;
    const auto cat = classify(checker, Assignment(space, v)).category;
    if (cat == label)
      hits += 1.0;
    else if (cat == Category::HPrime)
      n += params.risk_ratio - 1.0;
  }
  return wilson_lower_bound(hits, n);
}

}  // namespace

ReconfirmStats reconfirm(std::vector<Cluster>& previous, std::span<const Cluster> current,
                         std::span<const Sample> observed, Prober& prober, const BssnParams& params, Rng& rng, int t) {
  ReconfirmStats st;
  for (auto& p : previous) {
    if (p.stale || p.last_confirmed_t >= t) continue;
    if (p.space == SpaceTag::Input) {
      const bool seen = std::any_of(current.begin(), current.end(), [&](const Cluster& c) {
        return c.space == SpaceTag::Input && c.label == p.label && settled(c, params.epsilon) && c.box.overlaps(p.box);
      });
      if (seen) {
        p.last_confirmed_t = t;
        ++st.by_observation;
        continue;
      }
      const auto r = estimate_confidence(p.box, prober, params.confidence_samples, rng, params.risk_ratio);
      if (!r.fault && r.estimate.label == p.label && r.estimate.bound >= params.epsilon) {
        p.last_confirmed_t = t;
        p.confidence = r.estimate.bound;
        ++st.by_estimate;
      }
      continue;
    }
    const bool seen = std::any_of(observed.begin(), observed.end(), [&](const Sample& s) {
      return !s.fault && s.category == p.label && p.box.contains(s.v);
    });
    if (seen) {
      p.last_confirmed_t = t;
      ++st.by_observation;
      continue;
    }
    ++st.inversions;
    // A failed inversion leaves the cluster's confidence as it was.
    if (invert(prober, p, params, rng).ok()) {
      p.last_confirmed_t = t;
      ++st.inversion_successes;
    }
  }
  return st;
}

std::vector<Cluster> adapt(const std::vector<Cluster>& previous, const std::vector<Cluster>& current, Prober& prober,
                           const BssnParams& params, Rng& rng, int t, AdaptStats* stats) {
  AdaptStats st;
  std::vector<Cluster> merged = current;
  std::vector<Cluster> carried;

  for (const auto& p : previous) {
    bool done = false;
    if (!p.stale) {
      std::vector<std::size_t> peers;
      for (std::size_t j = 0; j < merged.size(); ++j) {
        const auto& c = merged[j];
        if (c.space == p.space && c.label == p.label && settled(c, params.epsilon) && c.box.intersects(p.box))
          peers.push_back(j);
      }
      // Containment needs no new evidence when the container is current.
      for (auto j : peers) {
        auto& c = merged[j];
        if (c.box.contains(p.box)) {
          c.born_t = std::min(c.born_t, p.born_t);
          c.support = std::max(c.support, p.support);
          ++st.absorbed;
          done = true;
          break;
        }
        if (p.last_confirmed_t >= t && p.box.contains(c.box)) {
          const int born = std::min(c.born_t, p.born_t);
          const auto support = std::max(c.support, p.support);
          c = p;
          c.born_t = born;
          c.support = support;
          ++st.absorbed;
          done = true;
          break;
        }
      }
      if (!done) {
        // Largest unions first, so maps consolidate quickly.
        std::stable_sort(peers.begin(), peers.end(), [&](std::size_t a, std::size_t b) {
          return p.box.hull(merged[a].box).volume() > p.box.hull(merged[b].box).volume();
        });
        for (std::size_t k = 0; k < peers.size() && k < kMergeAttempts && !done; ++k) {
          auto& c = merged[peers[k]];
          const Box hull = p.box.hull(c.box);
          double bound = 0.0;
          std::size_t support = p.support + c.support;
          if (p.space == SpaceTag::Input) {
            const auto r = estimate_confidence(hull, prober, params.confidence_samples, rng, params.risk_ratio);
            if (!r.fault && r.estimate.label == p.label) bound = r.estimate.bound;
            support += r.samples.size();
          } else {
            bound = supported_purity(hull, p.box, c.box, p.label, prober.checker(), params, rng);
          }
          if (bound < params.epsilon) continue;
          c.box = hull;
          c.confidence = bound;
          c.support = support;
          c.born_t = std::min(c.born_t, p.born_t);
          c.last_confirmed_t = t;
          c.stale = false;
          ++st.merged;
          done = true;
        }
      }
    }
    if (done) continue;
    Cluster q = p;
    if (t - q.last_confirmed_t >= params.staleness_window) q.stale = true;
    st.stale += q.stale;
    ++st.carried;
    carried.push_back(std::move(q));
  }

  std::vector<Cluster> all = std::move(merged);
  all.insert(all.end(), std::make_move_iterator(carried.begin()), std::make_move_iterator(carried.end()));

  // Drop clusters that a live same-label cluster at least as recent already covers.
  std::vector<bool> drop(all.size(), false);
  for (std::size_t k = 0; k < all.size(); ++k) {
    for (std::size_t m = 0; m < all.size() && !drop[k]; ++m) {
      if (m == k || drop[m]) continue;
      const auto& a = all[m];
      const auto& b = all[k];
      if (a.stale || a.unsettled || a.space != b.space || a.label != b.label) continue;
      if (a.last_confirmed_t < b.last_confirmed_t || !a.box.contains(b.box)) continue;
      if (a.box == b.box && a.last_confirmed_t == b.last_confirmed_t && m > k) continue;
      drop[k] = true;
    }
  }
  std::vector<Cluster> out;
  for (std::size_t k = 0; k < all.size(); ++k)
    if (!drop[k]) out.push_back(std::move(all[k]));
  if (stats) *stats = st;
  return out;
}

}  // namespace wai
