#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <variant>

#include "wai/constraint/parser.hpp"

namespace wai {
namespace {

SpacePtr make_space() {
  return std::make_shared<const VariableSpace>(std::vector<Variable>{
      Variable::boolean("a"), Variable::boolean("b"), Variable::boolean("c"), Variable::integer("i", 0, 4),
      Variable::integer_set("j", {1, 3, 5}), Variable::real("v1", -2.0, 2.0), Variable::real("v2", 0.0, 10.0)});
}

TEST(Parser, LinearRealConstraint) {
  auto space = make_space();
  const auto c = parse_constraint("lr hard 1.5*v1 - 2*v2 <= 3.0", *space);
  EXPECT_EQ(c.cls(), ConstraintClass::Lr);
  EXPECT_TRUE(c.hard());
  const auto& lin = std::get<LinearInequality>(c.body());
  ASSERT_EQ(lin.terms.size(), 2u);
  EXPECT_EQ(lin.terms[0].var, 5u);
  EXPECT_DOUBLE_EQ(lin.terms[0].coef, 1.5);
  EXPECT_EQ(lin.terms[1].var, 6u);
  EXPECT_DOUBLE_EQ(lin.terms[1].coef, -2.0);
  EXPECT_DOUBLE_EQ(lin.bound, 3.0);
}

TEST(Parser, SingleClause) {
  auto space = make_space();
  const auto c = parse_constraint("sat hard (a | !b)", *space);
  EXPECT_EQ(c.cls(), ConstraintClass::Sat);
  const auto& sat = std::get<SatClauses>(c.body());
  ASSERT_EQ(sat.clauses.size(), 1u);
  ASSERT_EQ(sat.clauses[0].size(), 2u);
  EXPECT_EQ(sat.clauses[0][0].var, 0u);
  EXPECT_FALSE(sat.clauses[0][0].negated);
  EXPECT_EQ(sat.clauses[0][1].var, 1u);
  EXPECT_TRUE(sat.clauses[0][1].negated);
}

TEST(Parser, WeightedNonlinear) {
  auto space = make_space();
  const auto c = parse_constraint("nl soft weight=2.0 sin(v1)*v2 <= 1.0", *space);
  EXPECT_EQ(c.cls(), ConstraintClass::Nl);
  EXPECT_FALSE(c.hard());
  EXPECT_DOUBLE_EQ(c.weight(), 2.0);
  const auto& nl = std::get<NlInequality>(c.body());
  EXPECT_DOUBLE_EQ(nl.bound, 1.0);
  EXPECT_DOUBLE_EQ(nl.expr.evaluate(std::vector<double>{0, 0, 0, 0, 1, 0.5, 4.0}), std::sin(0.5) * 4.0);
}

TEST(Parser, SoftWeightDefaultsToOne) {
  auto space = make_space();
  EXPECT_DOUBLE_EQ(parse_constraint("lr soft v1 <= 0", *space).weight(), 1.0);
}

TEST(Parser, ConjunctionOfClauses) {
  auto space = make_space();
  const auto c = parse_constraint("sat soft (a | b) & (!a) & c | !!b", *space);
  const auto& sat = std::get<SatClauses>(c.body());
  ASSERT_EQ(sat.clauses.size(), 3u);
  EXPECT_EQ(sat.clauses[2].size(), 2u);
  EXPECT_FALSE(sat.clauses[2][1].negated);
}

TEST(Parser, FiniteDomainForms) {
  auto space = make_space();
  const auto m = parse_constraint("fd hard j in {5, 1, 1}", *space);
  const auto& mem = std::get<FdMembership>(m.body());
  EXPECT_EQ(mem.var, 4u);
  EXPECT_EQ(mem.allowed, (std::vector<std::int64_t>{1, 5}));

  const auto q = parse_constraint("fd soft 2*i - j >= -3", *space);
  const auto& ineq = std::get<FdInequality>(q.body());
  ASSERT_EQ(ineq.terms.size(), 2u);
  EXPECT_DOUBLE_EQ(ineq.terms[0].coef, -2.0);
  EXPECT_DOUBLE_EQ(ineq.terms[1].coef, 1.0);
  EXPECT_DOUBLE_EQ(ineq.bound, 3.0);
  // 2*[0,4] - [1,5] ranges over [-5, 7].
  EXPECT_DOUBLE_EQ(ineq.span, 12.0);
}

TEST(Parser, LinearBothSidesAndSignedTerms) {
  auto space = make_space();
  const auto c = parse_constraint("lr hard v1 + 1 <= -0.5*v2 + - -2", *space);
  const auto& lin = std::get<LinearInequality>(c.body());
  ASSERT_EQ(lin.terms.size(), 2u);
  EXPECT_DOUBLE_EQ(lin.terms[1].coef, 0.5);
  EXPECT_DOUBLE_EQ(lin.bound, 1.0);
}

TEST(Parser, DistUnion) {
  auto space = make_space();
  const auto c = parse_constraint("nl hard dist_union(v1, v2; [0,1]x[0,1], [2, 3] x [0, 1]) <= 0", *space);
  const auto& nl = std::get<NlInequality>(c.body());
  ASSERT_EQ(nl.expr.op, Expr::Op::DistUnion);
  EXPECT_EQ(nl.expr.boxes.size(), 2u);
  EXPECT_DOUBLE_EQ(nl.expr.evaluate(std::vector<double>{0, 0, 0, 0, 1, 1.5, 0.5}), 0.5);
}

TEST(Parser, OperatorPrecedence) {
  auto space = make_space();
  const auto c = parse_constraint("nl hard -v1^2 + 2*v2/4 - min(v1, max(v2, 1)) <= 0", *space);
  const auto& nl = std::get<NlInequality>(c.body());
  const std::vector<double> v{0, 0, 0, 0, 1, 3.0, 2.0};
  EXPECT_DOUBLE_EQ(nl.expr.evaluate(v), -9.0 + 1.0 - 2.0);
}

TEST(Parser, PowerIsRightAssociative) {
  auto space = make_space();
  const auto c = parse_constraint("nl hard 2^3^2 <= 0", *space);
  const auto& nl = std::get<NlInequality>(c.body());
  EXPECT_DOUBLE_EQ(nl.expr.evaluate(std::vector<double>(7, 0.0)), 512.0);
}

TEST(Parser, RejectsUnknownVariable) {
  auto space = make_space();
  try {
    parse_constraint("lr hard v1 + zz <= 1", *space);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 13u);
    EXPECT_NE(std::string(e.what()).find("zz"), std::string::npos);
  }
}

TEST(Parser, RejectsKindMismatch) {
  auto space = make_space();
  EXPECT_THROW(parse_constraint("sat hard (a | v1)", *space), ParseError);
  EXPECT_THROW(parse_constraint("lr hard i <= 2", *space), ParseError);
  EXPECT_THROW(parse_constraint("fd hard v1 <= 2", *space), ParseError);
  EXPECT_THROW(parse_constraint("nl hard a * v1 <= 2", *space), ParseError);
}

TEST(Parser, SyntaxErrorsReportPositionAndExpectation) {
  auto space = make_space();
  try {
    parse_constraint("lr hard 1.5*v1 3", *space);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 15u);
    EXPECT_FALSE(e.expected().empty());
  }
  EXPECT_THROW(parse_constraint("qq hard v1 <= 1", *space), ParseError);
  EXPECT_THROW(parse_constraint("lr firm v1 <= 1", *space), ParseError);
  EXPECT_THROW(parse_constraint("sat hard (a | b", *space), ParseError);
  EXPECT_THROW(parse_constraint("nl hard foo(v1) <= 1", *space), ParseError);
  EXPECT_THROW(parse_constraint("nl hard v1 <= v2", *space), ParseError);
  EXPECT_THROW(parse_constraint("fd hard 1.5*i <= 2", *space), ParseError);
  EXPECT_THROW(parse_constraint("lr hard v1 <= 1 extra", *space), ParseError);
  EXPECT_THROW(parse_constraint("lr hard v1 $ 1", *space), ParseError);
  EXPECT_THROW(parse_constraint("nl hard dist_union(v1, v2; [0,1]) <= 0", *space), ParseError);
}

TEST(Parser, WeightRules) {
  auto space = make_space();
  EXPECT_THROW(parse_constraint("lr hard weight=2 v1 <= 1", *space), ParseError);
  EXPECT_THROW(parse_constraint("lr soft weight=0 v1 <= 1", *space), ParseError);
  EXPECT_THROW(parse_constraint("lr soft weight=-1 v1 <= 1", *space), ParseError);
}

TEST(Parser, VariableDeclarations) {
  const auto b = parse_variable("var flag : bool");
  EXPECT_EQ(b.kind, VarKind::Bool);
  const auto i = parse_variable("var n : int -2..3");
  EXPECT_EQ(i.kind, VarKind::Int);
  EXPECT_DOUBLE_EQ(i.lo, -2.0);
  EXPECT_DOUBLE_EQ(i.hi, 3.0);
  const auto s = parse_variable("var m : int {4, 2, 8}");
  EXPECT_EQ(s.allowed, (std::vector<std::int64_t>{2, 4, 8}));
  const auto r = parse_variable("var x : real 0.5..1.25");
  EXPECT_DOUBLE_EQ(r.lo, 0.5);
  EXPECT_DOUBLE_EQ(r.hi, 1.25);
  EXPECT_THROW(parse_variable("var x : real 2..1"), ParseError);
  EXPECT_THROW(parse_variable("var x : int 1.5..3"), ParseError);
  EXPECT_THROW(parse_variable("var x : complex"), ParseError);
}

TEST(Parser, SystemFile) {
  const auto sys = parse_constraint_system(R"(
# declarations may follow their use
lr hard v1 <= 1   # inline comment
lr soft v1 <= 0.2
var v1 : real 0..2
)");
  EXPECT_EQ(sys.size(), 2u);
  EXPECT_EQ(sys.space().size(), 1u);
  EXPECT_EQ(sys.bucket(ConstraintClass::Lr, Severity::Hard).size(), 1u);
  EXPECT_EQ(sys.bucket(ConstraintClass::Lr, Severity::Soft).size(), 1u);
}

TEST(Parser, SystemFileErrorsCarryLineNumbers) {
  try {
    parse_constraint_system("var v : real 0..1\n\n  lr hard w <= 1\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.position(), 10u);
  }
  EXPECT_THROW(parse_constraint_system("var v : real 0..1\nvar v : bool\n"), ParseError);
}

}  // namespace
}  // namespace wai
