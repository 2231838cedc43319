#include "wai/constraint/checker.hpp"

#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace wai {

std::string_view to_string(Category c) {
  switch (c) {
    case Category::HS: return "HS";
    case Category::HSPrime: return "HS_PRIME";
    case Category::HPrime: return "H_PRIME";
  }
  return "?";
}

std::optional<Category> category_from_string(std::string_view s) {
  if (s == "HS") return Category::HS;
  if (s == "HS_PRIME") return Category::HSPrime;
  if (s == "H_PRIME") return Category::HPrime;
  return std::nullopt;
}

namespace {

std::size_t bucket_index(ConstraintClass cls, Severity sev) {
  return static_cast<std::size_t>(cls) * 2 + static_cast<std::size_t>(sev);
}

bool real_valued(ConstraintClass cls) { return cls == ConstraintClass::Lr || cls == ConstraintClass::Nl; }

double hard_violation(const Constraint& c, const Assignment& a) {
  const double v = c.violation(a);
  return real_valued(c.cls()) && v <= kHardTolerance ? 0.0 : v;
}

}  // namespace

ConstraintSystem::ConstraintSystem(SpacePtr space, std::vector<Constraint> constraints)
    : space_(std::move(space)), constraints_(std::move(constraints)) {
  if (!space_) throw std::invalid_argument("constraint system without a variable space");
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    constraints_[i].validate(*space_);
    buckets_[bucket_index(constraints_[i].cls(), constraints_[i].severity())].push_back(i);
  }
}

const std::vector<std::size_t>& ConstraintSystem::bucket(ConstraintClass cls, Severity sev) const {
  return buckets_[bucket_index(cls, sev)];
}

std::vector<Constraint> ConstraintSystem::select(ConstraintClass cls, Severity sev) const {
  std::vector<Constraint> out;
  for (auto i : bucket(cls, sev)) out.push_back(constraints_[i]);
  return out;
}

ConstraintSystem ConstraintSystem::with(Constraint c) const {
  auto cs = constraints_;
  cs.push_back(std::move(c));
  return ConstraintSystem(space_, std::move(cs));
}

ConstraintSystem ConstraintSystem::without(std::size_t index) const {
  auto cs = constraints_;
  cs.erase(cs.begin() + static_cast<std::ptrdiff_t>(index));
  return ConstraintSystem(space_, std::move(cs));
}

ConstraintSystem ConstraintSystem::reweighted(std::size_t index, double weight) const {
  auto cs = constraints_;
  cs[index] = cs[index].reweighted(weight);
  return ConstraintSystem(space_, std::move(cs));
}

double eval_class_violation(std::span<const Constraint> constraints, const Assignment& a) {
  double total = 0.0;
  for (const auto& c : constraints) total += (c.hard() ? hard_violation(c, a) : c.violation(a)) * c.weight();
  return total;
}

Permissibility check_permissible(const ConstraintSystem& system, const Assignment& action) {
  for (std::size_t cls = 0; cls < kConstraintClassCount; ++cls) {
    for (auto i : system.bucket(static_cast<ConstraintClass>(cls), Severity::Hard)) {
      const auto& c = system.constraints()[i];
      const char* fault = nullptr;
      const double v = c.violation(action, fault);
      if (fault) return {false, fmt::format("constraint {}: {}", i, fault)};
      if (v > (real_valued(c.cls()) ? kHardTolerance : 0.0)) return {false, std::nullopt};
    }
  }
  return {true, std::nullopt};
}

double inefficiency(const ConstraintSystem& system, const Assignment& action) {
  std::array<double, kConstraintClassCount> per_class{};
  for (std::size_t cls = 0; cls < kConstraintClassCount; ++cls)
    for (auto i : system.bucket(static_cast<ConstraintClass>(cls), Severity::Soft)) {
      const auto& c = system.constraints()[i];
      per_class[cls] += c.violation(action) * c.weight();
    }
  return per_class[0] + per_class[1] + per_class[2] + per_class[3];
}

ActionClassification classify(const ConstraintSystem& system, const Assignment& action) {
  ActionClassification out;
  const auto& cs = system.constraints();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const auto& c = cs[i];
    const char* fault = nullptr;
    double v = c.violation(action, fault);
    if (fault) {
      if (!out.fault) out.fault = fmt::format("constraint {}: {}", i, fault);
      continue;
    }
    if (c.hard()) {
      out.v_hard += real_valued(c.cls()) && v <= kHardTolerance ? 0.0 : v;
    } else {
      out.v_soft += v;
      out.per_class_costs[static_cast<std::size_t>(c.cls())] += v * c.weight();
    }
  }
  const auto& p = out.per_class_costs;
  out.psi = p[0] + p[1] + p[2] + p[3];
  if (out.fault) {
    out.v_hard = std::numeric_limits<double>::infinity();
    out.category = Category::HPrime;
  } else if (out.v_hard > 0.0) {
    out.category = Category::HPrime;
  } else {
    out.category = out.psi > 0.0 ? Category::HSPrime : Category::HS;
  }
  return out;
}

std::vector<ActionClassification> classify_sequence(const ConstraintSystem& system,
                                                    std::span<const Assignment> actions) {
  std::vector<ActionClassification> out;
  out.reserve(actions.size());
  for (const auto& a : actions) out.push_back(classify(system, a));
  return out;
}

}  // namespace wai
