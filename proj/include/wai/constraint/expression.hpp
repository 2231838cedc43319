#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wai/geometry.hpp"

namespace wai {

/// Domain fault while evaluating a nonlinear expression (division by zero,
/// 0 raised to a negative power, non-finite intermediate results).
class EvaluationFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Nonlinear expression tree over positional variables.
struct Expr {
  enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Abs, Min, Max, Sin, Cos, Exp, DistUnion };

  Op op = Op::Const;
  double value = 0.0;              // Const
  std::size_t var = 0;             // Var
  std::vector<Expr> args;          // operands
  std::vector<std::size_t> point;  // DistUnion coordinates
  std::vector<Box> boxes;          // DistUnion boxes

  static Expr constant(double v);
  static Expr variable(std::size_t index);
  static Expr unary(Op op, Expr arg);
  static Expr binary(Op op, Expr lhs, Expr rhs);
  static Expr dist_union(std::vector<std::size_t> point, std::vector<Box> boxes);

  /// Throws EvaluationFault on domain faults.
  [[nodiscard]] double evaluate(std::span<const double> values) const;
  /// Non-throwing form: on a fault sets `fault` (first fault wins) and the
  /// result is meaningless.
  [[nodiscard]] double evaluate(std::span<const double> values, const char*& fault) const noexcept;
  void collect_variables(std::vector<std::size_t>& out) const;
  [[nodiscard]] std::string to_string(const std::vector<std::string>& names) const;
};

}  // namespace wai
