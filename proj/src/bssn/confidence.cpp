#include "wai/bssn/confidence.hpp"

#include <algorithm>
#include <cmath>

namespace wai {

double wilson_lower_bound(double successes, double n, double z) {
  if (n <= 0.0) return 0.0;
  const double p = successes / n;
  const double z2 = z * z;
  const double centre = p + z2 / (2.0 * n);
  const double spread = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return std::clamp((centre - spread) / (1.0 + z2 / n), 0.0, 1.0);
}

PurityEstimate purity_from_counts(const LabelCounts& counts, double risk_ratio) {
  PurityEstimate e;
  e.counts = counts;
  for (auto c : counts) e.samples += c;
  // Scan from most to least severe so ties keep the severe label.
  std::size_t best = kCategoryCount - 1;
  for (std::size_t i = kCategoryCount - 1; i-- > 0;)
    if (counts[i] > counts[best]) best = i;
  e.label = static_cast<Category>(best);
  double n = static_cast<double>(e.samples);
  if (e.label != Category::HPrime)
    n += (risk_ratio - 1.0) * static_cast<double>(counts[static_cast<std::size_t>(Category::HPrime)]);
  e.bound = wilson_lower_bound(static_cast<double>(counts[best]), n);
  return e;
}

}  // namespace wai
