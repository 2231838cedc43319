#include "wai/constraint/constraint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace wai {

std::string_view to_string(ConstraintClass c) {
  switch (c) {
    case ConstraintClass::Sat: return "sat";
    case ConstraintClass::Fd: return "fd";
    case ConstraintClass::Lr: return "lr";
    case ConstraintClass::Nl: return "nl";
  }
  return "?";
}

std::string_view to_string(Severity s) { return s == Severity::Hard ? "hard" : "soft"; }

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

ConstraintClass class_of(const ConstraintBody& body) {
  return std::visit(overloaded{
                        [](const SatClauses&) { return ConstraintClass::Sat; },
                        [](const FdInequality&) { return ConstraintClass::Fd; },
                        [](const FdMembership&) { return ConstraintClass::Fd; },
                        [](const LinearInequality&) { return ConstraintClass::Lr; },
                        [](const NlInequality&) { return ConstraintClass::Nl; },
                    },
                    body);
}

double linear_value(const std::vector<LinearTerm>& terms, std::span<const double> v) {
  double s = 0.0;
  for (const auto& t : terms) s += t.coef * v[t.var];
  return s;
}

void require_kind(const VariableSpace& space, std::size_t var, std::initializer_list<VarKind> kinds,
                  ConstraintClass cls) {
  if (var >= space.size()) throw std::invalid_argument(fmt::format("variable index {} out of range", var));
  const auto& v = space[var];
  if (std::find(kinds.begin(), kinds.end(), v.kind) == kinds.end())
    throw std::invalid_argument(
        fmt::format("{} variable '{}' cannot appear in a {} constraint", to_string(v.kind), v.name, to_string(cls)));
}

}  // namespace

double linear_form_span(const std::vector<LinearTerm>& terms, const VariableSpace& space) {
  double span = 0.0;
  for (const auto& t : terms) span += std::fabs(t.coef) * (space[t.var].hi - space[t.var].lo);
  return span > 0.0 ? span : 1.0;
}

Constraint::Constraint(Severity severity, std::optional<double> weight, ConstraintBody body, std::string source)
    : cls_(class_of(body)), severity_(severity), body_(std::move(body)), source_(std::move(source)) {
  if (severity_ == Severity::Hard) {
    if (weight) throw std::invalid_argument("hard constraints carry no weight");
  } else {
    weight_ = weight.value_or(1.0);
    if (!(weight_ > 0.0) || !std::isfinite(weight_))
      throw std::invalid_argument(fmt::format("soft constraint weight must be > 0 (got {})", weight_));
  }
}

double Constraint::violation(const Assignment& a) const {
  const char* fault = nullptr;
  const double v = violation(a, fault);
  if (fault) throw EvaluationFault(fault);
  return v;
}

double Constraint::violation(const Assignment& a, const char*& fault) const noexcept {
  const auto v = a.values();
  return std::visit(
      overloaded{
          [&](const SatClauses& s) {
            double violated = 0.0;
            for (const auto& clause : s.clauses) {
              bool sat = false;
              for (const auto& lit : clause)
                if ((v[lit.var] != 0.0) != lit.negated) {
                  sat = true;
                  break;
                }
              if (!sat) violated += 1.0;
            }
            return violated;
          },
          [&](const FdInequality& f) { return std::max(0.0, linear_value(f.terms, v) - f.bound) / f.span; },
          [&](const FdMembership& m) {
            const auto x = static_cast<std::int64_t>(v[m.var]);
            return std::find(m.allowed.begin(), m.allowed.end(), x) == m.allowed.end() ? 1.0 : 0.0;
          },
          [&](const LinearInequality& l) { return std::max(0.0, linear_value(l.terms, v) - l.bound); },
          [&](const NlInequality& n) { return std::max(0.0, n.expr.evaluate(v, fault) - n.bound); },
      },
      body_);
}

Constraint Constraint::reweighted(double weight) const {
  if (hard()) throw std::invalid_argument("hard constraints carry no weight");
  return Constraint(severity_, weight, body_, source_);
}

void Constraint::validate(const VariableSpace& space) const {
  std::visit(overloaded{
                 [&](const SatClauses& s) {
                   for (const auto& c : s.clauses)
                     for (const auto& l : c) require_kind(space, l.var, {VarKind::Bool}, cls_);
                 },
                 [&](const FdInequality& f) {
                   for (const auto& t : f.terms) require_kind(space, t.var, {VarKind::Int}, cls_);
                 },
                 [&](const FdMembership& m) { require_kind(space, m.var, {VarKind::Int}, cls_); },
                 [&](const LinearInequality& l) {
                   for (const auto& t : l.terms) require_kind(space, t.var, {VarKind::Real}, cls_);
                 },
                 [&](const NlInequality& n) {
                   std::vector<std::size_t> vars;
                   n.expr.collect_variables(vars);
                   for (auto var : vars) require_kind(space, var, {VarKind::Int, VarKind::Real}, cls_);
                 },
             },
             body_);
}

}  // namespace wai
