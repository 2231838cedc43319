#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wai/bssn/types.hpp"
#include "wai/constraint/checker.hpp"
#include "wai/sut/reference.hpp"

namespace wai {

enum class Epoch { Pre, Post };

std::string_view to_string(Epoch e);

struct Region {
  char name = '?';
  Box box;
  bool in_sg = false;  // satisfies every hard constraint
  bool in_sh = false;  // satisfies every soft constraint
  bool in_sb = false;  // reachable before learning
  bool in_sa = false;  // reachable after learning
};

/// The thirteen-cell testing space: two action dimensions over [0, 10]^2,
/// constraint geometry S_g and S_h, and the SUT's behaviour space before
/// (S_b) and after (S_a) learning.
struct Scenario {
  Box input_box;
  Box action_box;
  std::vector<Region> regions;  // A..M
  std::string constraint_text;
  std::shared_ptr<const ConstraintSystem> constraints;
  /// Regions reached by the equal-width input strips, left to right.
  std::vector<char> pre_order;
  std::vector<char> post_order;
  SutSpec sut_pre;
  SutSpec sut_post;
  std::uint64_t seed = 0;

  /// Throws std::out_of_range for an unknown name.
  [[nodiscard]] const Region& region(char name) const;
  [[nodiscard]] const SutSpec& sut(Epoch e) const { return e == Epoch::Pre ? sut_pre : sut_post; }
  /// Names of the regions passing `pred`, alphabetically.
  template <class Pred>
  [[nodiscard]] std::string members(Pred pred) const {
    std::string s;
    for (const auto& r : regions)
      if (pred(r)) s += r.name;
    return s;
  }
  /// SUT that behaves as sut_pre until round `trigger_round` begins, then as sut_post.
  [[nodiscard]] SutSpec learning_sut(int trigger_round, double fault_rate = 0.0) const;
};

Scenario build_figure2_scenario(std::uint64_t seed);

struct OracleLabel {
  std::optional<char> region;  // empty outside every named cell
  Category category = Category::HS;
};

/// Ground truth by set membership: H' outside S_g, HS' in S_g but outside S_h, else HS.
OracleLabel oracle_label(const Scenario& s, std::span<const double> v);

/// Image of an input-space box under the epoch's piecewise map, one box per
/// strip the input box meets with positive width.
std::vector<Box> push_through(const Scenario& s, Epoch e, const Box& input);

struct ScoreCard {
  double recall_hprime = 0.0;
  double precision_hprime = 0.0;
  double recall_hsprime = 0.0;
  double precision_hsprime = 0.0;
  bool lost_capacity_detected = false;
  std::optional<int> new_violation_latency;
  double g_coverage = 0.0;  // share of G under HS clusters
};

inline constexpr int kScoreGrid = 200;

/// Grid-scored quality of a cluster map for one epoch. Stale and unsettled
/// clusters are ignored, as are clusters last confirmed before `post_from`
/// when scoring the post epoch. Input clusters are pushed through that
/// epoch's map. Precision of an empty prediction is 0.
ScoreCard score(std::span<const Cluster> clusters, const Scenario& s, Epoch e, int post_from = 0);

/// Some settled action cluster lies over a vacated cell (B, D or I), and every such cluster is stale.
bool lost_capacity_detected(std::span<const Cluster> clusters, const Scenario& s);

/// True when the map holds a live H' cluster, confirmed at or after
/// `post_from`, that meets L or M.
bool new_violation_found(std::span<const Cluster> clusters, const Scenario& s, int post_from);

}  // namespace wai
