#include "wai/bssn/types.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace wai {

std::string_view to_string(SpaceTag s) { return s == SpaceTag::Input ? "input" : "action"; }

LabelCounts count_labels(const std::vector<Sample>& samples) {
  LabelCounts c{};
  for (const auto& s : samples) ++c[static_cast<std::size_t>(s.category)];
  return c;
}

void BssnParams::validate() const {
  auto fail = [](const char* field, const std::string& why) {
    throw std::invalid_argument(fmt::format("BssnParams.{}: {}", field, why));
  };
  if (!(epsilon > 0.5 && epsilon < 1.0)) fail("epsilon", fmt::format("{} not in (0.5, 1)", epsilon));
  if (round_budget == 0) fail("round_budget", "must be positive");
  if (inversion_budget == 0) fail("inversion_budget", "must be positive");
  if (max_partition_depth == 0) fail("max_partition_depth", "must be positive");
  if (!(min_box_fraction > 0.0 && min_box_fraction < 1.0))
    fail("min_box_fraction", fmt::format("{} not in (0, 1)", min_box_fraction));
  if (!(explore_temperature >= 0.0 && explore_temperature <= 1.0))
    fail("explore_temperature", fmt::format("{} not in [0, 1]", explore_temperature));
  if (!(risk_ratio >= 1.0)) fail("risk_ratio", fmt::format("{} below 1", risk_ratio));
  if (staleness_window <= 0) fail("staleness_window", "must be positive");
  if (confidence_samples == 0) fail("confidence_samples", "must be positive");
  if (partition_budget == 0) fail("partition_budget", "must be positive");
}

}  // namespace wai
