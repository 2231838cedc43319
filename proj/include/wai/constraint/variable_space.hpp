#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wai/geometry.hpp"

namespace wai {

enum class VarKind { Bool, Int, Real };

std::string_view to_string(VarKind kind);

struct Variable {
  std::string name;
  VarKind kind = VarKind::Real;
  // Bool: [0, 1]. Int: [lo, hi] range, or the hull of `allowed` when enumerated.
  double lo = 0.0;
  double hi = 0.0;
  // Enumerated integer domain (sorted, unique); empty for ranges.
  std::vector<std::int64_t> allowed;

  static Variable boolean(std::string name);
  static Variable integer(std::string name, std::int64_t lo, std::int64_t hi);
  static Variable integer_set(std::string name, std::vector<std::int64_t> values);
  static Variable real(std::string name, double lo, double hi);

  [[nodiscard]] bool admits(double value) const;
  /// Number of admissible values for discrete kinds; 0 for reals.
  [[nodiscard]] std::size_t domain_size() const;
};

/// Ordered, name-unique list of variables. Assignments are positional.
class VariableSpace {
 public:
  VariableSpace() = default;
  explicit VariableSpace(std::vector<Variable> vars);

  [[nodiscard]] std::size_t size() const { return vars_.size(); }
  [[nodiscard]] bool empty() const { return vars_.empty(); }
  [[nodiscard]] const Variable& operator[](std::size_t i) const { return vars_[i]; }
  [[nodiscard]] const std::vector<Variable>& variables() const { return vars_; }
  [[nodiscard]] std::optional<std::size_t> index_of(std::string_view name) const;

  /// Hull of every variable's domain.
  [[nodiscard]] Box bounds() const;

  friend bool operator==(const VariableSpace& a, const VariableSpace& b);

 private:
  std::vector<Variable> vars_;
};

using SpacePtr = std::shared_ptr<const VariableSpace>;

/// One value per variable of a space, each inside its declared domain.
/// Booleans are stored as 0/1 and integers as integral doubles.
class Assignment {
 public:
  Assignment(SpacePtr space, std::vector<double> values);

  [[nodiscard]] const VariableSpace& space() const { return *space_; }
  [[nodiscard]] const SpacePtr& space_ptr() const { return space_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] bool as_bool(std::size_t i) const { return values_[i] != 0.0; }

  friend bool operator==(const Assignment& a, const Assignment& b) { return a.values_ == b.values_; }

 private:
  SpacePtr space_;
  std::vector<double> values_;
};

/// Clamp and round an arbitrary point onto the nearest admissible assignment.
Assignment snap_to_space(const SpacePtr& space, std::span<const double> point);

}  // namespace wai
