#include "wai/constraint/variable_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include <fmt/format.h>

namespace wai {

std::string_view to_string(VarKind kind) {
  switch (kind) {
    case VarKind::Bool: return "bool";
    case VarKind::Int: return "int";
    case VarKind::Real: return "real";
  }
  return "?";
}

Variable Variable::boolean(std::string name) {
  return Variable{std::move(name), VarKind::Bool, 0.0, 1.0, {}};
}

Variable Variable::integer(std::string name, std::int64_t lo, std::int64_t hi) {
  return Variable{std::move(name), VarKind::Int, static_cast<double>(lo), static_cast<double>(hi), {}};
}

Variable Variable::integer_set(std::string name, std::vector<std::int64_t> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  Variable v{std::move(name), VarKind::Int, 0.0, -1.0, std::move(values)};
  if (!v.allowed.empty()) {
    v.lo = static_cast<double>(v.allowed.front());
    v.hi = static_cast<double>(v.allowed.back());
  }
  return v;
}

Variable Variable::real(std::string name, double lo, double hi) {
  return Variable{std::move(name), VarKind::Real, lo, hi, {}};
}

bool Variable::admits(double value) const {
  switch (kind) {
    case VarKind::Bool: return value == 0.0 || value == 1.0;
    case VarKind::Int:
      // Range first, so the integral test can truncate without overflow.
      if (!(value >= lo && value <= hi) || value != static_cast<double>(static_cast<std::int64_t>(value))) return false;
      return allowed.empty() ||
             std::binary_search(allowed.begin(), allowed.end(), static_cast<std::int64_t>(value));
    case VarKind::Real: return value >= lo && value <= hi;
  }
  return false;
}

std::size_t Variable::domain_size() const {
  switch (kind) {
    case VarKind::Bool: return 2;
    case VarKind::Int:
      return allowed.empty() ? static_cast<std::size_t>(hi - lo) + 1 : allowed.size();
    case VarKind::Real: return 0;
  }
  return 0;
}

VariableSpace::VariableSpace(std::vector<Variable> vars) : vars_(std::move(vars)) {
  std::unordered_set<std::string> seen;
  for (const auto& v : vars_) {
    if (v.name.empty()) throw std::invalid_argument("variable with empty name");
    if (!seen.insert(v.name).second) throw std::invalid_argument(fmt::format("duplicate variable '{}'", v.name));
    if (!(v.lo <= v.hi)) throw std::invalid_argument(fmt::format("variable '{}' has an empty domain", v.name));
    if (v.kind == VarKind::Real && (!std::isfinite(v.lo) || !std::isfinite(v.hi)))
      throw std::invalid_argument(fmt::format("variable '{}' needs finite bounds", v.name));
  }
}

std::optional<std::size_t> VariableSpace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name == name) return i;
  return std::nullopt;
}

Box VariableSpace::bounds() const {
  std::vector<Interval> dims;
  dims.reserve(vars_.size());
  for (const auto& v : vars_) dims.push_back({v.lo, v.hi});
  return Box(std::move(dims));
}

bool operator==(const VariableSpace& a, const VariableSpace& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a[i];
    const auto& y = b[i];
    if (x.name != y.name || x.kind != y.kind || x.lo != y.lo || x.hi != y.hi || x.allowed != y.allowed) return false;
  }
  return true;
}

Assignment::Assignment(SpacePtr space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw std::invalid_argument("assignment without a variable space");
  if (values_.size() != space_->size())
    throw std::invalid_argument(
        fmt::format("assignment arity {} does not match space arity {}", values_.size(), space_->size()));
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!(*space_)[i].admits(values_[i]))
      throw std::invalid_argument(
          fmt::format("value {} outside the domain of '{}'", values_[i], (*space_)[i].name));
}

Assignment snap_to_space(const SpacePtr& space, std::span<const double> point) {
  std::vector<double> values(space->size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& var = (*space)[i];
    double x = std::isnan(point[i]) ? var.lo : std::clamp(point[i], var.lo, var.hi);
    switch (var.kind) {
      case VarKind::Bool: x = x >= 0.5 ? 1.0 : 0.0; break;
      case VarKind::Int:
        x = std::round(x);
        if (!var.allowed.empty()) {
          auto it = std::lower_bound(var.allowed.begin(), var.allowed.end(), static_cast<std::int64_t>(x));
          if (it == var.allowed.end()) --it;
          else if (it != var.allowed.begin() && x - static_cast<double>(*std::prev(it)) < static_cast<double>(*it) - x)
            --it;
          x = static_cast<double>(*it);
        }
        break;
      case VarKind::Real: break;
    }
    values[i] = x;
  }
  return Assignment(space, std::move(values));
}

}  // namespace wai
