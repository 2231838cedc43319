#include "wai/constraint/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <optional>

#include <fmt/format.h>

namespace wai {

namespace {

std::string format_error(const std::string& message, std::size_t position, const std::string& expected,
                         std::size_t line) {
  std::string out = line > 0 ? fmt::format("line {}, col {}: {}", line, position + 1, message)
                             : fmt::format("col {}: {}", position + 1, message);
  if (!expected.empty()) out += fmt::format(" (expected {})", expected);
  return out;
}

}  // namespace

ParseError::ParseError(std::string message, std::size_t position, std::string expected, std::size_t line)
    : std::runtime_error(format_error(message, position, expected, line)),
      message_(std::move(message)),
      position_(position),
      expected_(std::move(expected)),
      line_(line) {}

namespace {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  std::size_t pos = 0;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto is_digit = [&](std::size_t k) { return k < s.size() && std::isdigit(static_cast<unsigned char>(s[k])); };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), 0.0, start});
      continue;
    }
    if (is_digit(i) || (c == '.' && is_digit(i + 1))) {
      while (is_digit(i)) ++i;
      // A '.' belongs to the number only when a digit follows, so `0..5` is a range.
      if (i < s.size() && s[i] == '.' && is_digit(i + 1)) {
        ++i;
        while (is_digit(i)) ++i;
      }
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t k = i + 1;
        if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
        if (is_digit(k)) {
          i = k;
          while (is_digit(i)) ++i;
        }
      }
      const std::string text(s.substr(start, i - start));
      double value = 0.0;
      const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
      if (res.ec != std::errc()) throw ParseError(fmt::format("malformed number '{}'", text), start);
      out.push_back({Tok::Number, text, value, start});
      continue;
    }
    if (i + 1 < s.size()) {
      const std::string_view two = s.substr(i, 2);
      if (two == "<=" || two == ">=" || two == "..") {
        out.push_back({Tok::Punct, std::string(two), 0.0, start});
        i += 2;
        continue;
      }
    }
    static constexpr std::string_view kSingle = "()|&!,;[]{}+-*/^=:<>";
    if (kSingle.find(c) == std::string_view::npos)
      throw ParseError(fmt::format("unexpected character '{}'", c), start);
    out.push_back({Tok::Punct, std::string(1, c), 0.0, start});
    ++i;
  }
  out.push_back({Tok::End, "", 0.0, s.size()});
  return out;
}

struct LinearForm {
  std::map<std::size_t, double> coefs;
  double constant = 0.0;
};

class Parser {
 public:
  Parser(std::string_view text, const VariableSpace* space) : tokens_(tokenize(text)), space_(space) {}

  Constraint constraint(std::string source) {
    const Token cls_tok = expect_ident("constraint class (sat, fd, lr, nl)");
    ConstraintClass cls;
    if (cls_tok.text == "sat") cls = ConstraintClass::Sat;
    else if (cls_tok.text == "fd") cls = ConstraintClass::Fd;
    else if (cls_tok.text == "lr") cls = ConstraintClass::Lr;
    else if (cls_tok.text == "nl") cls = ConstraintClass::Nl;
    else throw ParseError(fmt::format("unknown constraint class '{}'", cls_tok.text), cls_tok.pos, "sat, fd, lr or nl");

    const Token sev_tok = expect_ident("severity (hard, soft)");
    Severity sev;
    if (sev_tok.text == "hard") sev = Severity::Hard;
    else if (sev_tok.text == "soft") sev = Severity::Soft;
    else throw ParseError(fmt::format("unknown severity '{}'", sev_tok.text), sev_tok.pos, "hard or soft");

    std::optional<double> weight;
    if (peek().kind == Tok::Ident && peek().text == "weight" && peek(1).text == "=") {
      const std::size_t at = peek().pos;
      advance();
      advance();
      if (sev == Severity::Hard) throw ParseError("hard constraints take no weight", at);
      const double w = signed_number("weight value");
      if (!(w > 0.0)) throw ParseError(fmt::format("weight must be > 0 (got {})", w), at);
      weight = w;
    }

    ConstraintBody body;
    switch (cls) {
      case ConstraintClass::Sat: body = sat(); break;
      case ConstraintClass::Fd: body = fd(); break;
      case ConstraintClass::Lr: body = lr(); break;
      case ConstraintClass::Nl: body = nl(); break;
    }
    if (peek().kind != Tok::End) throw ParseError(fmt::format("unexpected '{}'", peek().text), peek().pos, "end of constraint");
    return Constraint(sev, weight, std::move(body), std::move(source));
  }

  Variable variable() {
    const Token kw = expect_ident("'var'");
    if (kw.text != "var") throw ParseError(fmt::format("unexpected '{}'", kw.text), kw.pos, "'var'");
    const Token name = expect_ident("variable name");
    expect(":");
    const Token kind = expect_ident("bool, int or real");
    Variable v;
    if (kind.text == "bool") {
      v = Variable::boolean(name.text);
    } else if (kind.text == "int") {
      if (accept("{")) {
        std::vector<std::int64_t> values{integer("integer")};
        while (accept(",")) values.push_back(integer("integer"));
        expect("}");
        v = Variable::integer_set(name.text, std::move(values));
      } else {
        const auto lo = integer("lower bound");
        expect("..");
        const auto hi = integer("upper bound");
        if (lo > hi) throw ParseError(fmt::format("empty domain {}..{}", lo, hi), kind.pos);
        v = Variable::integer(name.text, lo, hi);
      }
    } else if (kind.text == "real") {
      const double lo = signed_number("lower bound");
      expect("..");
      const double hi = signed_number("upper bound");
      if (!(lo <= hi)) throw ParseError(fmt::format("empty interval {}..{}", lo, hi), kind.pos);
      v = Variable::real(name.text, lo, hi);
    } else {
      throw ParseError(fmt::format("unknown kind '{}'", kind.text), kind.pos, "bool, int or real");
    }
    if (peek().kind != Tok::End) throw ParseError(fmt::format("unexpected '{}'", peek().text), peek().pos, "end of declaration");
    return v;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return tokens_[std::min(idx_ + ahead, tokens_.size() - 1)]; }
  const Token& advance() { return tokens_[idx_ < tokens_.size() - 1 ? idx_++ : idx_]; }

  bool is(std::string_view punct) const { return peek().kind == Tok::Punct && peek().text == punct; }
  bool accept(std::string_view punct) {
    if (!is(punct)) return false;
    advance();
    return true;
  }
  [[noreturn]] void fail(const std::string& expected) const {
    const auto& t = peek();
    throw ParseError(t.kind == Tok::End ? "unexpected end of input" : fmt::format("unexpected '{}'", t.text), t.pos,
                     expected);
  }
  void expect(std::string_view punct) {
    if (!accept(punct)) fail(fmt::format("'{}'", punct));
  }
  Token expect_ident(const std::string& expected) {
    if (peek().kind != Tok::Ident) fail(expected);
    return advance();
  }

  double signed_number(const std::string& expected) {
    double sign = 1.0;
    if (accept("-")) sign = -1.0;
    else accept("+");
    if (peek().kind != Tok::Number) fail(expected);
    return sign * advance().number;
  }

  std::int64_t integer(const std::string& expected) {
    const std::size_t at = peek().pos;
    const double v = signed_number(expected);
    if (v != std::floor(v) || std::fabs(v) > 9.0e15) throw ParseError(fmt::format("{} is not an integer", v), at, expected);
    return static_cast<std::int64_t>(v);
  }

  std::size_t var_ref(const Token& tok, std::initializer_list<VarKind> kinds, ConstraintClass cls) const {
    const auto idx = space_->index_of(tok.text);
    if (!idx) throw ParseError(fmt::format("unknown variable '{}'", tok.text), tok.pos);
    const auto kind = (*space_)[*idx].kind;
    if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
      throw ParseError(fmt::format("{} variable '{}' cannot appear in a {} constraint", to_string(kind), tok.text,
                                   to_string(cls)),
                       tok.pos);
    return *idx;
  }

  // sat: clause ('&' clause)*, clause: '(' lits ')' | lits, lits: lit ('|' lit)*
  SatClauses sat() {
    SatClauses out;
    do {
      const bool paren = accept("(");
      Clause clause{literal()};
      while (accept("|")) clause.push_back(literal());
      if (paren) expect(")");
      out.clauses.push_back(std::move(clause));
    } while (accept("&"));
    return out;
  }

  Literal literal() {
    bool negated = false;
    while (accept("!")) negated = !negated;
    const Token t = expect_ident("boolean variable");
    return {var_ref(t, {VarKind::Bool}, ConstraintClass::Sat), negated};
  }

  // Linear form: term (('+'|'-') term)*, term: [number '*'] ident | number.
  LinearForm linear(ConstraintClass cls, VarKind kind) {
    LinearForm form;
    double sign = 1.0;
    while (true) {
      while (true) {
        if (accept("-")) sign = -sign;
        else if (!accept("+")) break;
      }
      double coef = sign;
      if (peek().kind == Tok::Number) {
        coef *= advance().number;
        if (accept("*")) {
          const Token t = expect_ident("variable");
          form.coefs[var_ref(t, {kind}, cls)] += coef;
        } else {
          form.constant += coef;
        }
      } else if (peek().kind == Tok::Ident) {
        const Token t = advance();
        const auto var = var_ref(t, {kind}, cls);
        if (accept("*")) {
          if (peek().kind != Tok::Number) fail("number");
          coef *= advance().number;
        }
        form.coefs[var] += coef;
      } else {
        fail("term");
      }
      if (accept("+")) sign = 1.0;
      else if (accept("-")) sign = -1.0;
      else break;
    }
    return form;
  }

  // lhs (<=|>=) rhs normalised to sum(terms) <= bound.
  std::pair<std::vector<LinearTerm>, double> linear_inequality(ConstraintClass cls, VarKind kind) {
    LinearForm lhs = linear(cls, kind);
    double dir = 1.0;
    if (accept(">=")) dir = -1.0;
    else if (!accept("<=")) fail(cls == ConstraintClass::Fd ? "'<=', '>=' or 'in'" : "'<=' or '>='");
    LinearForm rhs = linear(cls, kind);
    for (const auto& [var, c] : rhs.coefs) lhs.coefs[var] -= c;
    std::vector<LinearTerm> terms;
    for (const auto& [var, c] : lhs.coefs)
      if (c != 0.0) terms.push_back({var, dir * c});
    return {std::move(terms), dir * (rhs.constant - lhs.constant)};
  }

  ConstraintBody fd() {
    if (peek().kind == Tok::Ident && peek(1).kind == Tok::Ident && peek(1).text == "in") {
      const Token t = advance();
      const auto var = var_ref(t, {VarKind::Int}, ConstraintClass::Fd);
      advance();
      expect("{");
      std::vector<std::int64_t> allowed{integer("integer")};
      while (accept(",")) allowed.push_back(integer("integer"));
      expect("}");
      std::sort(allowed.begin(), allowed.end());
      allowed.erase(std::unique(allowed.begin(), allowed.end()), allowed.end());
      return FdMembership{var, std::move(allowed)};
    }
    const std::size_t at = peek().pos;
    auto [terms, bound] = linear_inequality(ConstraintClass::Fd, VarKind::Int);
    auto integral = [](double x) { return x == std::floor(x); };
    if (!integral(bound) || !std::all_of(terms.begin(), terms.end(), [&](const LinearTerm& t) { return integral(t.coef); }))
      throw ParseError("fd inequalities need integer coefficients and bound", at);
    const double span = linear_form_span(terms, *space_);
    return FdInequality{std::move(terms), bound, span};
  }

  ConstraintBody lr() {
    auto [terms, bound] = linear_inequality(ConstraintClass::Lr, VarKind::Real);
    return LinearInequality{std::move(terms), bound};
  }

  ConstraintBody nl() {
    Expr e = expr();
    expect("<=");
    const double bound = signed_number("number");
    return NlInequality{std::move(e), bound};
  }

  Expr expr() {
    Expr lhs = term();
    while (true) {
      if (accept("+")) lhs = Expr::binary(Expr::Op::Add, std::move(lhs), term());
      else if (accept("-")) lhs = Expr::binary(Expr::Op::Sub, std::move(lhs), term());
      else return lhs;
    }
  }

  Expr term() {
    Expr lhs = unary();
    while (true) {
      if (accept("*")) lhs = Expr::binary(Expr::Op::Mul, std::move(lhs), unary());
      else if (accept("/")) lhs = Expr::binary(Expr::Op::Div, std::move(lhs), unary());
      else return lhs;
    }
  }

  Expr unary() {
    if (accept("-")) return Expr::unary(Expr::Op::Neg, unary());
    if (accept("+")) return unary();
    return power();
  }

  // Right-associative; the exponent may carry its own sign.
  Expr power() {
    Expr base = primary();
    if (accept("^")) return Expr::binary(Expr::Op::Pow, std::move(base), unary());
    return base;
  }

  Expr primary() {
    if (peek().kind == Tok::Number) return Expr::constant(advance().number);
    if (accept("(")) {
      Expr e = expr();
      expect(")");
      return e;
    }
    if (peek().kind != Tok::Ident) fail("expression");
    const Token t = advance();
    if (is("(")) {
      static const std::map<std::string, std::pair<Expr::Op, int>, std::less<>> kFunctions = {
          {"abs", {Expr::Op::Abs, 1}}, {"sin", {Expr::Op::Sin, 1}}, {"cos", {Expr::Op::Cos, 1}},
          {"exp", {Expr::Op::Exp, 1}}, {"min", {Expr::Op::Min, 2}}, {"max", {Expr::Op::Max, 2}},
      };
      if (t.text == "dist_union") return dist_union();
      const auto it = kFunctions.find(t.text);
      if (it == kFunctions.end()) throw ParseError(fmt::format("unknown function '{}'", t.text), t.pos);
      advance();
      Expr a = expr();
      if (it->second.second == 1) {
        expect(")");
        return Expr::unary(it->second.first, std::move(a));
      }
      expect(",");
      Expr b = expr();
      expect(")");
      return Expr::binary(it->second.first, std::move(a), std::move(b));
    }
    return Expr::variable(var_ref(t, {VarKind::Int, VarKind::Real}, ConstraintClass::Nl));
  }

  // dist_union(v1, v2; [a,b]x[c,d], ...)
  Expr dist_union() {
    expect("(");
    std::vector<std::size_t> point;
    do {
      const Token t = expect_ident("variable");
      point.push_back(var_ref(t, {VarKind::Int, VarKind::Real}, ConstraintClass::Nl));
    } while (accept(","));
    expect(";");
    std::vector<Box> boxes;
    do {
      const std::size_t at = peek().pos;
      std::vector<Interval> dims{interval()};
      while (peek().kind == Tok::Ident && (peek().text == "x" || peek().text == "X")) {
        advance();
        dims.push_back(interval());
      }
      if (dims.size() != point.size())
        throw ParseError(fmt::format("box has {} dimensions, point has {}", dims.size(), point.size()), at);
      boxes.emplace_back(std::move(dims));
    } while (accept(","));
    expect(")");
    return Expr::dist_union(std::move(point), std::move(boxes));
  }

  Interval interval() {
    const std::size_t at = peek().pos;
    expect("[");
    const double lo = signed_number("number");
    expect(",");
    const double hi = signed_number("number");
    expect("]");
    if (!(lo <= hi)) throw ParseError(fmt::format("empty interval [{}, {}]", lo, hi), at);
    return {lo, hi};
  }

  std::vector<Token> tokens_;
  std::size_t idx_ = 0;
  const VariableSpace* space_;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_declaration(std::string_view line) {
  return line.size() > 3 && line.substr(0, 3) == "var" && std::isspace(static_cast<unsigned char>(line[3]));
}

}  // namespace

Constraint parse_constraint(std::string_view text, const VariableSpace& space) {
  Parser p(text, &space);
  return p.constraint(std::string(trim(text)));
}

Variable parse_variable(std::string_view text) {
  Parser p(text, nullptr);
  return p.variable();
}

ConstraintSystem parse_constraint_system(std::string_view text) {
  struct Line {
    std::size_t number;
    std::string_view body;
    std::size_t offset;  // column of body within the raw line
  };
  std::vector<Line> decls, rules;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    const auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string_view body = trim(raw);
    if (body.empty()) continue;
    const std::size_t offset = static_cast<std::size_t>(body.data() - raw.data());
    (is_declaration(body) ? decls : rules).push_back({number, body, offset});
  }

  auto relocate = [](const ParseError& e, const Line& line) {
    return ParseError(e.message(), e.position() + line.offset, e.expected(), line.number);
  };

  std::vector<Variable> vars;
  for (const auto& d : decls) {
    try {
      vars.push_back(parse_variable(d.body));
    } catch (const ParseError& e) {
      throw relocate(e, d);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), d.offset, {}, d.number);
    }
  }
  SpacePtr space;
  try {
    space = std::make_shared<const VariableSpace>(std::move(vars));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0, {}, decls.empty() ? 0 : decls.front().number);
  }

  std::vector<Constraint> constraints;
  for (const auto& r : rules) {
    try {
      constraints.push_back(parse_constraint(r.body, *space));
    } catch (const ParseError& e) {
      throw relocate(e, r);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), r.offset, {}, r.number);
    }
  }
  return ConstraintSystem(space, std::move(constraints));
}

}  // namespace wai
