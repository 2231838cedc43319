#pragma once

#include <cstddef>

#include "wai/bssn/types.hpp"

namespace wai {

/// One-sided 95% z.
inline constexpr double kWilsonZ = 1.645;

/// Lower end of the Wilson score interval for `successes` out of `n`
/// (n may be fractional). 0 when n <= 0.
double wilson_lower_bound(double successes, double n, double z = kWilsonZ);

struct PurityEstimate {
  Category label = Category::HS;
  double bound = 0.0;
  LabelCounts counts{};
  std::size_t samples = 0;
};

/// Majority label by raw counts (ties go to the more severe label) and the
/// Wilson bound of its proportion. When the majority is HS or HS', each H'
/// sample weighs `risk_ratio` in the denominator.
PurityEstimate purity_from_counts(const LabelCounts& counts, double risk_ratio);

}  // namespace wai
