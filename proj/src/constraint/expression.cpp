#include "wai/constraint/expression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace wai {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Records the first fault only; later operands see NaN and keep propagating it.
double checked(double v, const char* what, const char*& fault) {
  if (!std::isfinite(v) && !fault) fault = what;
  return v;
}

}  // namespace

Expr Expr::constant(double v) {
  Expr e;
  e.op = Op::Const;
  e.value = v;
  return e;
}

Expr Expr::variable(std::size_t index) {
  Expr e;
  e.op = Op::Var;
  e.var = index;
  return e;
}

Expr Expr::unary(Op op, Expr arg) {
  Expr e;
  e.op = op;
  e.args.push_back(std::move(arg));
  return e;
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  Expr e;
  e.op = op;
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  return e;
}

Expr Expr::dist_union(std::vector<std::size_t> point, std::vector<Box> boxes) {
  Expr e;
  e.op = Op::DistUnion;
  e.point = std::move(point);
  e.boxes = std::move(boxes);
  return e;
}

double Expr::evaluate(std::span<const double> values) const {
  const char* fault = nullptr;
  const double v = evaluate(values, fault);
  if (fault) throw EvaluationFault(fault);
  return v;
}

double Expr::evaluate(std::span<const double> values, const char*& fault) const noexcept {
  auto arg = [&](std::size_t i) { return args[i].evaluate(values, fault); };
  switch (op) {
    case Op::Const: return value;
    case Op::Var: return values[var];
    case Op::Neg: return -arg(0);
    case Op::Add: return checked(arg(0) + arg(1), "non-finite result in +", fault);
    case Op::Sub: return checked(arg(0) - arg(1), "non-finite result in -", fault);
    case Op::Mul: return checked(arg(0) * arg(1), "non-finite result in *", fault);
    case Op::Div: {
      const double num = arg(0);
      const double den = arg(1);
      if (den == 0.0) {
        if (!fault) fault = "division by zero";
        return kNaN;
      }
      return checked(num / den, "non-finite result in /", fault);
    }
    case Op::Pow: {
      const double base = arg(0);
      const double exponent = arg(1);
      if (base == 0.0 && exponent < 0.0) {
        if (!fault) fault = "0 raised to a negative power";
        return kNaN;
      }
      return checked(std::pow(base, exponent), "non-finite result in ^", fault);
    }
    case Op::Abs: return std::fabs(arg(0));
    case Op::Min: return std::min(arg(0), arg(1));
    case Op::Max: return std::max(arg(0), arg(1));
    case Op::Sin: return checked(std::sin(arg(0)), "non-finite result in sin", fault);
    case Op::Cos: return checked(std::cos(arg(0)), "non-finite result in cos", fault);
    case Op::Exp: return checked(std::exp(arg(0)), "non-finite result in exp", fault);
    case Op::DistUnion: {
      constexpr std::size_t kInline = 16;
      double inline_buf[kInline];
      std::vector<double> heap;
      double* buf = inline_buf;
      if (point.size() > kInline) {
        heap.resize(point.size());
        buf = heap.data();
      }
      for (std::size_t i = 0; i < point.size(); ++i) buf[i] = values[point[i]];
      return checked(distance_to_union(std::span<const double>(buf, point.size()), boxes),
                     "non-finite result in dist_union", fault);
    }
  }
  if (!fault) fault = "unknown operator";
  return kNaN;
}

void Expr::collect_variables(std::vector<std::size_t>& out) const {
  if (op == Op::Var) out.push_back(var);
  for (auto p : point) out.push_back(p);
  for (const auto& a : args) a.collect_variables(out);
}

std::string Expr::to_string(const std::vector<std::string>& names) const {
  auto fn = [&](const char* f) { return fmt::format("{}({})", f, args[0].to_string(names)); };
  auto fn2 = [&](const char* f) {
    return fmt::format("{}({}, {})", f, args[0].to_string(names), args[1].to_string(names));
  };
  auto bin = [&](const char* o) {
    return fmt::format("({} {} {})", args[0].to_string(names), o, args[1].to_string(names));
  };
  switch (op) {
    case Op::Const: return fmt::format("{}", value);
    case Op::Var: return names.at(var);
    case Op::Neg: return fmt::format("-{}", args[0].to_string(names));
    case Op::Add: return bin("+");
    case Op::Sub: return bin("-");
    case Op::Mul: return bin("*");
    case Op::Div: return bin("/");
    case Op::Pow: return bin("^");
    case Op::Abs: return fn("abs");
    case Op::Min: return fn2("min");
    case Op::Max: return fn2("max");
    case Op::Sin: return fn("sin");
    case Op::Cos: return fn("cos");
    case Op::Exp: return fn("exp");
    case Op::DistUnion: {
      std::string s = "dist_union(";
      for (std::size_t i = 0; i < point.size(); ++i) s += (i ? "," : "") + names.at(point[i]);
      s += ";";
      for (std::size_t b = 0; b < boxes.size(); ++b) {
        s += b ? ", " : " ";
        for (std::size_t d = 0; d < boxes[b].dim(); ++d)
          s += fmt::format("{}[{},{}]", d ? "x" : "", boxes[b][d].lo, boxes[b][d].hi);
      }
      return s + ")";
    }
  }
  return "?";
}

}  // namespace wai
