#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wai/bssn/confidence.hpp"
#include "wai/bssn/prober.hpp"
#include "wai/bssn/types.hpp"
#include "wai/random.hpp"

namespace wai {

/// Uniform point of `box` that the space admits (integers uniform over the
/// admissible values inside the box).
std::vector<double> sample_point(const VariableSpace& space, const Box& box, Rng& rng);

struct Bisection {
  std::size_t dim = 0;
  double cut = 0.0;  // points with x[dim] <= cut go to `lower`
  Box lower;
  Box upper;
};

/// Halves `box` along its longest side relative to the space's extent
/// (integer sides split between adjacent values). Empty when nothing can be split.
std::optional<Bisection> bisect(const Box& box, const VariableSpace& space);

/// One cluster per label present: the bounding box of that label's inputs.
std::vector<Cluster> compress_inputs(const TestRound& round);
/// As compress_inputs over the actions; faulted samples have no action and are skipped.
std::vector<Cluster> compress_actions(const TestRound& round);

struct ConfidenceResult {
  PurityEstimate estimate;
  std::vector<Sample> samples;
  bool fault = false;

  /// Majority-label bound, 0 after a SUT fault.
  [[nodiscard]] double confidence() const { return fault ? 0.0 : estimate.bound; }
};

/// `n` uniform probes in `box`, scored by purity_from_counts.
ConfidenceResult estimate_confidence(const Box& box, Prober& prober, std::size_t n, Rng& rng, double risk_ratio);
/// Input-space clusters only; throws std::invalid_argument otherwise or when n = 0.
double estimate_confidence(const Cluster& cluster, Prober& prober, std::size_t n, Rng& rng, double risk_ratio);

struct PartitionResult {
  std::vector<Cluster> leaves;
  /// Samples inside each leaf, index-aligned with `leaves`.
  std::vector<std::vector<Sample>> evidence;
  std::size_t probes = 0;
  bool budget_exhausted = false;
};

/// Recursive bisection of an input-space cluster until every leaf's purity
/// bound reaches epsilon. Leaves that stop on a guard or on the probe budget
/// carry unsettled = true. `known` samples inside the box are reused before
/// any new probe is spent.
PartitionResult partition(const Cluster& parent, Prober& prober, const BssnParams& params, Rng& rng, int t,
                          std::span<const Sample> known = {});

enum class InversionStatus { Success, BudgetExhausted, SutFault };

std::string_view to_string(InversionStatus s);

struct InversionResult {
  InversionStatus status = InversionStatus::BudgetExhausted;
  std::optional<Assignment> x;
  std::vector<double> v;  // action that landed in the target
  Category category = Category::HS;
  double best_distance = 0.0;
  std::size_t evaluations = 0;
  bool reconfirmed = false;  // a repeat probe of x landed in the target again

  [[nodiscard]] bool ok() const { return status == InversionStatus::Success; }
};

/// (mu+lambda) evolutionary search for an input whose action lands in
/// `target`. Fitness is the Euclidean distance from the action to the box.
/// `region` restricts the search (defaults to the whole input space).
InversionResult invert(Prober& prober, const Box& target, const BssnParams& params, Rng& rng,
                       const std::optional<Box>& region = std::nullopt);
/// Action-space cluster overload: success also requires the landed action to carry the cluster's label.
InversionResult invert(Prober& prober, const Cluster& target, const BssnParams& params, Rng& rng,
                       const std::optional<Box>& region = std::nullopt);

/// Action clusters summarising where the SUT's outputs went for each input
/// cluster confirmed at round t. The box bounds the cluster-labelled actions
/// of the evidence whose inputs fall in the input cluster; confidence comes
/// from every evidence action inside that box. Clusters below epsilon are dropped.
std::vector<Cluster> derive_action_clusters(std::span<const Cluster> input_clusters, std::span<const Sample> evidence,
                                            const BssnParams& params, int t);

struct ReconfirmStats {
  std::size_t by_observation = 0;
  std::size_t by_estimate = 0;
  std::size_t inversions = 0;
  std::size_t inversion_successes = 0;
};

/// Refreshes last_confirmed_t of previous clusters that the evidence of round
/// t still supports. Input clusters: overlap with a settled same-label current
/// cluster, else a fresh confidence estimate. Action clusters: an observed
/// same-label action inside the box, else an inversion attempt. Stale
/// clusters are left alone.
ReconfirmStats reconfirm(std::vector<Cluster>& previous, std::span<const Cluster> current,
                         std::span<const Sample> observed, Prober& prober, const BssnParams& params, Rng& rng, int t);

struct AdaptStats {
  std::size_t merged = 0;
  std::size_t absorbed = 0;
  std::size_t carried = 0;
  std::size_t stale = 0;
};

/// Merges clusters of round t-1 into same-label peers of round t when the
/// union's bounding box keeps a purity bound of at least epsilon. Input-space
/// unions are re-probed; action-space unions are scored against the checker
/// with only points inside either box counting as supported. Unmerged
/// previous clusters are carried and become stale once they go W rounds
/// without confirmation.
std::vector<Cluster> adapt(const std::vector<Cluster>& previous, const std::vector<Cluster>& current, Prober& prober,
                           const BssnParams& params, Rng& rng, int t, AdaptStats* stats = nullptr);

}  // namespace wai
