#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wai/constraint/expression.hpp"
#include "wai/constraint/variable_space.hpp"

namespace wai {

enum class ConstraintClass { Sat = 0, Fd = 1, Lr = 2, Nl = 3 };
inline constexpr std::size_t kConstraintClassCount = 4;

enum class Severity { Hard = 0, Soft = 1 };

std::string_view to_string(ConstraintClass c);
std::string_view to_string(Severity s);

struct Literal {
  std::size_t var = 0;
  bool negated = false;
};
using Clause = std::vector<Literal>;

/// CNF over boolean variables.
struct SatClauses {
  std::vector<Clause> clauses;
};

struct LinearTerm {
  std::size_t var = 0;
  double coef = 0.0;
};

/// sum(coef * var) <= bound over integer variables. `span` is the range of
/// the linear form over the declared domains and normalises the violation.
struct FdInequality {
  std::vector<LinearTerm> terms;
  double bound = 0.0;
  double span = 1.0;
};

/// var in {allowed...}
struct FdMembership {
  std::size_t var = 0;
  std::vector<std::int64_t> allowed;
};

/// sum(coef * var) <= bound over real variables.
struct LinearInequality {
  std::vector<LinearTerm> terms;
  double bound = 0.0;
};

/// expr <= bound.
struct NlInequality {
  Expr expr;
  double bound = 0.0;
};

using ConstraintBody = std::variant<SatClauses, FdInequality, FdMembership, LinearInequality, NlInequality>;

/// Range of the linear form over the variables' domains; 1 when degenerate.
double linear_form_span(const std::vector<LinearTerm>& terms, const VariableSpace& space);

class Constraint {
 public:
  /// Soft constraints need weight > 0 (defaults to 1); hard constraints carry none.
  Constraint(Severity severity, std::optional<double> weight, ConstraintBody body, std::string source = {});

  [[nodiscard]] ConstraintClass cls() const { return cls_; }
  [[nodiscard]] Severity severity() const { return severity_; }
  [[nodiscard]] bool hard() const { return severity_ == Severity::Hard; }
  /// 1 for hard constraints.
  [[nodiscard]] double weight() const { return weight_; }
  [[nodiscard]] const ConstraintBody& body() const { return body_; }
  [[nodiscard]] const std::string& source() const { return source_; }

  /// Unit-weight violation magnitude, 0 iff satisfied:
  ///   SAT  violated clause count
  ///   FD   (excess / span) for inequalities, 1 outside the set for membership
  ///   LR/NL hinge max(0, lhs - bound)
  /// Throws EvaluationFault for NL domain faults.
  [[nodiscard]] double violation(const Assignment& a) const;
  /// Non-throwing form; sets `fault` instead of throwing.
  [[nodiscard]] double violation(const Assignment& a, const char*& fault) const noexcept;

  [[nodiscard]] Constraint reweighted(double weight) const;

  /// Throws std::invalid_argument when a referenced variable is missing or of
  /// the wrong kind for this class.
  void validate(const VariableSpace& space) const;

 private:
  ConstraintClass cls_;
  Severity severity_;
  double weight_ = 1.0;
  ConstraintBody body_;
  std::string source_;
};

}  // namespace wai
