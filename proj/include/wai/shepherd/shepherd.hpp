#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "wai/bssn/types.hpp"
#include "wai/geometry.hpp"

namespace wai {

struct PerformanceIndicators {
  double settled_volume = 0.0;          // share of the region under clusters with confidence >= epsilon
  double h_prime_volume = 0.0;          // share labelled H'
  double purity_mean = 0.0;             // mean confidence of settled clusters
  double inversion_success_rate = 1.0;  // 1 when no inversion was attempted
  std::uint64_t compute_spend = 0;      // probes and inversion evaluations this round
  std::uint64_t gate_blocks = 0;
  int stagnation = 0;                   // rounds since h_prime_volume last grew

  /// Throws std::invalid_argument when a fraction leaves [0, 1] or stagnation is negative.
  void validate() const;

  friend bool operator==(const PerformanceIndicators&, const PerformanceIndicators&) = default;
};

enum class Rule { CostRelief = 1, InversionBudget = 2, Exploration = 3, Tighten = 4 };

/// "R1".."R4".
std::string_view to_string(Rule r);

struct ShepherdConfig {
  std::uint64_t cost_threshold = 60000;  // compute_spend above this is cost pressure
  double relief_factor = 0.95;
  double epsilon_floor = 0.55;
  double min_inversion_rate = 0.2;
  std::size_t budget_cap_factor = 10;    // inversion_budget never exceeds this many times its initial value
  int stagnation_limit = 5;
  double temperature_step = 0.1;
  double temperature_cap = 1.0;
  double tighten_purity = 0.99;
  double tighten_factor = 1.02;
  double epsilon_cap = 0.99;
};

struct InfluenceResult {
  std::vector<BssnParams> params;
  std::vector<std::vector<Rule>> fired;  // per agent, in rule order
};

/// The beta-agent. It adjusts parameters and regions only; it has no access
/// to the constraint system.
class Shepherd {
 public:
  /// `initial` fixes each agent's inversion-budget cap.
  explicit Shepherd(std::vector<BssnParams> initial, ShepherdConfig config = {});

  [[nodiscard]] const ShepherdConfig& config() const { return config_; }
  [[nodiscard]] std::size_t agents() const { return initial_.size(); }

  /// p^{t+1} from p^t and the indicators; lists are index-aligned.
  /// Throws std::invalid_argument on a length mismatch.
  [[nodiscard]] InfluenceResult influence(std::span<const BssnParams> params,
                                          std::span<const PerformanceIndicators> indicators) const;

 private:
  std::vector<BssnParams> initial_;
  ShepherdConfig config_;
};

struct RegionAssignment {
  std::vector<Box> boxes;  // one per agent

  friend bool operator==(const RegionAssignment&, const RegionAssignment&) = default;
};

/// Recursive bisection of `global` into `agents` boxes. With indicators and
/// the previous assignment, each cut balances the estimated unsettled volume
/// ((1 - settled_volume) spread uniformly over each previous box); otherwise,
/// or when nothing is unsettled, cuts balance plain volume.
RegionAssignment assign_regions(std::size_t agents, const Box& global,
                                std::span<const PerformanceIndicators> indicators = {},
                                const RegionAssignment* previous = nullptr);

/// Unsettled volume of `box` under the indicators of a previous assignment.
double unsettled_mass(const Box& box, const RegionAssignment& previous,
                      std::span<const PerformanceIndicators> indicators);

/// Pairwise non-overlapping boxes inside `global` whose volumes add up to it.
bool is_exact_cover(const RegionAssignment& a, const Box& global, double tol = 1e-9);

}  // namespace wai
