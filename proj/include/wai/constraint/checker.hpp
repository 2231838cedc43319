#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wai/constraint/constraint.hpp"
#include "wai/constraint/variable_space.hpp"

namespace wai {

/// Action trichotomy: effective and efficient (HS), effective but inefficient
/// (HS'), unpermissible (H').
enum class Category { HS = 0, HSPrime = 1, HPrime = 2 };
inline constexpr std::size_t kCategoryCount = 3;

std::string_view to_string(Category c);
std::optional<Category> category_from_string(std::string_view s);
/// H' > HS' > HS.
constexpr int severity_rank(Category c) { return static_cast<int>(c); }

/// LR/NL hard violations at or below this count as satisfied.
inline constexpr double kHardTolerance = 1e-9;

struct ActionClassification {
  Category category = Category::HS;
  double psi = 0.0;     // weighted soft cost
  double v_hard = 0.0;  // unit-weight hard violation total
  double v_soft = 0.0;  // unit-weight soft violation total
  std::array<double, kConstraintClassCount> per_class_costs{};  // weighted soft cost per class
  std::optional<std::string> fault;
};

struct Permissibility {
  bool permitted = true;
  std::optional<std::string> fault;

  explicit operator bool() const { return permitted; }
};

/// Immutable hard/soft constraint set over one variable space. Safe to share
/// across threads.
class ConstraintSystem {
 public:
  ConstraintSystem(SpacePtr space, std::vector<Constraint> constraints);

  [[nodiscard]] const VariableSpace& space() const { return *space_; }
  [[nodiscard]] const SpacePtr& space_ptr() const { return space_; }
  [[nodiscard]] const std::vector<Constraint>& constraints() const { return constraints_; }
  [[nodiscard]] std::size_t size() const { return constraints_.size(); }

  /// Indices of the constraints of one (class, severity) bucket.
  [[nodiscard]] const std::vector<std::size_t>& bucket(ConstraintClass cls, Severity sev) const;
  /// Copies of the constraints of one (class, severity) bucket.
  [[nodiscard]] std::vector<Constraint> select(ConstraintClass cls, Severity sev) const;

  [[nodiscard]] ConstraintSystem with(Constraint c) const;
  [[nodiscard]] ConstraintSystem without(std::size_t index) const;
  [[nodiscard]] ConstraintSystem reweighted(std::size_t index, double weight) const;

 private:
  SpacePtr space_;
  std::vector<Constraint> constraints_;
  std::array<std::vector<std::size_t>, kConstraintClassCount * 2> buckets_;
};

/// Summed violation of a list of constraints (weighted for soft ones).
/// Throws EvaluationFault on NL domain faults.
double eval_class_violation(std::span<const Constraint> constraints, const Assignment& a);

/// True iff every hard constraint holds. NL faults make the action
/// unpermissible and are reported in `fault`.
Permissibility check_permissible(const ConstraintSystem& system, const Assignment& action);

/// Weighted soft-violation cost. Throws EvaluationFault on NL faults.
double inefficiency(const ConstraintSystem& system, const Assignment& action);

/// Faults classify as H' with v_hard = +inf.
ActionClassification classify(const ConstraintSystem& system, const Assignment& action);

std::vector<ActionClassification> classify_sequence(const ConstraintSystem& system,
                                                    std::span<const Assignment> actions);

}  // namespace wai
