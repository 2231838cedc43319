#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "wai/bssn/operators.hpp"
#include "wai/bssn/prober.hpp"
#include "wai/bssn/types.hpp"
#include "wai/random.hpp"
#include "wai/sut/gate.hpp"

namespace wai {

/// Substream selectors under an agent's seed.
enum class Stream : std::uint64_t { Round = 1, Partition = 2, Reconfirm = 3, Adapt = 4, Live = 5 };

struct ExploreResult {
  TestRound round;
  std::vector<Cluster> leaves;    // settled and unsettled, pairwise non-overlapping
  std::vector<Sample> evidence;   // every sample probed while exploring
  LabelCounts focus_probes{};     // round probes spent near unsettled boxes, by their majority label
  std::size_t partition_probes = 0;
  bool budget_exhausted = false;
  double settled_volume = 0.0;    // fractions of the region
  double h_prime_volume = 0.0;
  double purity_mean = 0.0;       // over settled leaves
};

/// One BSSN agent: owns its SUT handle, output gate and random stream.
class BssnAgent {
 public:
  BssnAgent(std::size_t id, std::unique_ptr<Sut> sut, std::shared_ptr<const ConstraintSystem> checker,
            BssnParams params, std::uint64_t seed, bool block_soft = false);

  BssnAgent(const BssnAgent&) = delete;
  BssnAgent& operator=(const BssnAgent&) = delete;

  [[nodiscard]] std::size_t id() const { return id_; }
  [[nodiscard]] const BssnParams& params() const { return params_; }
  void set_params(const BssnParams& p);
  [[nodiscard]] Sut& sut() { return *sut_; }
  [[nodiscard]] Prober& prober() { return prober_; }
  [[nodiscard]] GateState& gate() { return gate_; }
  [[nodiscard]] const GateState& gate() const { return gate_; }
  [[nodiscard]] const ConstraintSystem& checker() const { return *checker_; }
  /// Unsettled leaves of the last exploration, which bias the next round's sampling.
  [[nodiscard]] const std::vector<Cluster>& unsettled() const { return unsettled_; }
  /// Replaces the boxes the next round focuses on.
  void set_unsettled(std::vector<Cluster> boxes) { unsettled_ = std::move(boxes); }

  [[nodiscard]] Rng stream(int t, Stream s) const;

  /// M what-if probes inside `region`: a temperature-controlled mix of
  /// uniform draws and draws around the last unsettled boxes, weighted
  /// towards severe labels. Stops at the first SUT fault.
  TestRound run_round(const Box& region, int t);

  /// run_round, then compression and partition of each compressed box.
  ExploreResult explore(const Box& region, int t);

  GateOutcome gatekeep(const Assignment& x, int t);

 private:
  std::size_t id_;
  std::unique_ptr<Sut> sut_;
  std::shared_ptr<const ConstraintSystem> checker_;
  BssnParams params_;
  std::uint64_t seed_;
  Prober prober_;
  GateState gate_;
  std::vector<Cluster> unsettled_;
  LabelCounts last_focus_{};
};

/// Smallest box obtained by repeatedly bisecting `region` that still
/// contains `box`. Aligns partitions of different boxes to one grid.
Box aligned_cover(const Box& region, const Box& box, const VariableSpace& space, std::size_t max_depth);

}  // namespace wai
