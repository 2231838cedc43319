#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wai/constraint/checker.hpp"
#include "wai/geometry.hpp"

namespace wai {

enum class SpaceTag { Input, Action };

std::string_view to_string(SpaceTag s);

/// Labelled axis-aligned box over the input space X or the action space V.
struct Cluster {
  SpaceTag space = SpaceTag::Input;
  Box box;
  Category label = Category::HS;
  double confidence = 0.0;  // lower bound on label purity
  std::size_t support = 0;  // labelled samples inside
  int born_t = 0;
  int last_confirmed_t = 0;
  bool stale = false;
  bool unsettled = false;  // partition gave up before reaching the required confidence
};

/// One probed input with what came back.
struct Sample {
  std::vector<double> x;
  std::vector<double> v;  // empty when the SUT faulted
  Category category = Category::HS;
  double psi = 0.0;
  bool fault = false;
};

using LabelCounts = std::array<std::size_t, kCategoryCount>;

LabelCounts count_labels(const std::vector<Sample>& samples);

/// M paired inputs, actions and classifications. A SUT fault truncates the
/// round; the partial lists stay paired.
struct TestRound {
  int t = 0;
  std::vector<Sample> samples;
  std::optional<std::string> fault;

  [[nodiscard]] std::size_t size() const { return samples.size(); }
  [[nodiscard]] bool empty() const { return samples.empty(); }
};

struct BssnParams {
  double epsilon = 0.9;                     // required purity confidence, in (0.5, 1)
  std::size_t round_budget = 500;           // M
  std::size_t inversion_budget = 1000;      // SUT evaluations per inversion attempt
  std::size_t max_partition_depth = 16;
  double min_box_fraction = 1.0 / 128.0;    // smallest side as a fraction of the domain span
  double explore_temperature = 0.5;         // share of uniform samples in a round, in [0, 1]
  double risk_ratio = 10.0;                 // weight of an H' sample inside an HS/HS' box
  int staleness_window = 5;                 // W
  std::size_t confidence_samples = 32;      // probes per confidence estimate
  std::size_t partition_budget = 20000;     // probes per partition call

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  friend bool operator==(const BssnParams&, const BssnParams&) = default;
};

}  // namespace wai
