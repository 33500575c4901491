#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "envnav/lang/diagnostic.hpp"
#include "envnav/lang/parser.hpp"
#include "test_support.hpp"

namespace envnav::lang {
namespace {

using testing::parse_ok;

const Expr& body_of(const Specification& s, std::string_view name) {
  const ArtifactDef* a = s.find(name);
  if (!a) throw std::runtime_error("no artifact " + std::string(name));
  if (const auto* r = std::get_if<RuleDef>(a)) return *r->body;
  return *std::get<FunctionDef>(*a).body;
}

ExprPtr parse_expr(const std::string& sensors, const std::string& body) {
  Specification s = parse_ok(sensors + "function f context(a) { " + body + " }\n");
  return std::get<FunctionDef>(*s.find("f")).body;
}

std::string reformat(const std::string& body) {
  return format_expr(*parse_expr("sensor a numeric;\nsensor b numeric;\nsensor c numeric;\n", body));
}

TEST(Parser, EmptySourceIsEmptySpec) {
  auto r = parse_spec("");
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r.diagnostics.empty());
  EXPECT_TRUE(r.spec->empty());
}

TEST(Parser, CommentsAndCrlf) {
  auto r = parse_spec("# header\r\nsensor s1 numeric; # trailing\r\nstep 900;\r\n");
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r.spec->sensors.size(), 1u);
  EXPECT_EQ(r.spec->sensors[0].id, "s1");
  EXPECT_EQ(r.spec->step, 900);
}

TEST(Parser, SensorDeclarations) {
  auto s = parse_ok("sensor flag logic label \"pump \\\"A\\\"\" unit \"%\";\n");
  ASSERT_EQ(s.sensors.size(), 1u);
  EXPECT_EQ(s.sensors[0].kind, SeriesKind::Logic);
  EXPECT_EQ(s.sensors[0].label, "pump \"A\"");
  EXPECT_EQ(s.sensors[0].unit, "%");
}

TEST(Parser, HeatingRuleShape) {
  auto s = parse_ok(testing::heating_rule_source());
  const auto& root = std::get<IfThenElse>(body_of(s, "R").node);
  const auto& cond = std::get<Binary>(root.cond->node);
  EXPECT_EQ(cond.op, BinaryOp::And);
  EXPECT_EQ(std::get<Ref>(cond.lhs->node).name, "StandardShiftOperation");
  EXPECT_EQ(std::get<Binary>(cond.rhs->node).op, BinaryOp::Lt);
  EXPECT_EQ(std::get<Ref>(root.then_branch->node).name, "Characteristic1");
  ASSERT_TRUE(root.else_branch);
  const auto& inner = std::get<IfThenElse>(root.else_branch->node);
  EXPECT_FALSE(inner.else_branch);
  EXPECT_EQ(std::get<Ref>(inner.then_branch->node).name, "Characteristic2");
  const auto& icond = std::get<Binary>(inner.cond->node);
  EXPECT_EQ(std::get<Unary>(icond.lhs->node).op, UnaryOp::Not);
}

TEST(Parser, ArtifactKinds) {
  auto s = parse_ok(testing::heating_rule_source() +
                    "metric m context(i1) { QUANTILE(0.5) PerDay }\nfunction g context(i1) { i1 * 2 }\n");
  EXPECT_EQ(kind_of(*s.find("R")), ArtifactKind::Rule);
  EXPECT_EQ(kind_of(*s.find("g")), ArtifactKind::Function);
  EXPECT_EQ(kind_of(*s.find("StandardShiftOperation")), ArtifactKind::TimeRoutine);
  EXPECT_EQ(kind_of(*s.find("Characteristic2")), ArtifactKind::Characteristic);
  const auto& m = std::get<MetricDef>(*s.find("m"));
  EXPECT_EQ(m.base, MetricBase::Quantile);
  EXPECT_EQ(m.params, std::vector<double>{0.5});
  EXPECT_EQ(m.filter, TimeFilter::PerDay);
  const auto& c = std::get<CharacteristicDef>(*s.find("Characteristic2"));
  EXPECT_TRUE(c.upper.empty());
  EXPECT_EQ(c.lower, (std::vector<Point>{{-10, 16}, {10, 17}}));
}

TEST(Parser, TimeRoutineFields) {
  auto s = parse_ok("timeroutine W {\n  dayofweek Monday, Wednesday-Friday;\n  hour 0-5, 22;\n}\n"
                    "timeroutine X { include W; exclude W; }\n");
  const auto& w = std::get<TimeRoutineDef>(*s.find("W"));
  ASSERT_TRUE(w.field(CalendarField::DayOfWeek));
  EXPECT_EQ(w.field(CalendarField::DayOfWeek)->items, (std::vector<FieldRange>{{1, 1}, {3, 5}}));
  EXPECT_EQ(w.field(CalendarField::Hour)->items, (std::vector<FieldRange>{{0, 5}, {22, 22}}));
  EXPECT_FALSE(w.field(CalendarField::Year));
  const auto& x = std::get<TimeRoutineDef>(*s.find("X"));
  EXPECT_FALSE(x.declares_fields());
  EXPECT_EQ(x.includes, std::vector<std::string>{"W"});
  EXPECT_EQ(x.excludes, std::vector<std::string>{"W"});
}

TEST(Parser, TemplatesAndInstances) {
  const auto& corpus = testing::spec_corpus();
  auto it = std::find_if(corpus.begin(), corpus.end(), [](const std::string& c) { return c.rfind("template", 0) == 0; });
  ASSERT_NE(it, corpus.end());
  auto s = parse_ok(*it);
  ASSERT_EQ(s.templates.size(), 1u);
  EXPECT_EQ(s.templates[0].params.size(), 2u);
  EXPECT_EQ(s.templates[0].body.size(), 2u);
  ASSERT_EQ(s.instances.size(), 2u);
  EXPECT_EQ(s.instances[1].prefix, "ahu2.");
  EXPECT_EQ(s.instances[1].bindings[0], (std::pair<std::string, std::string>{"supply_temp", "j1"}));
}

TEST(Precedence, ArithmeticBindsTighterThanComparison) {
  EXPECT_EQ(reformat("a + b * c > a - b / c"), "a + b * c > a - b / c");
  EXPECT_EQ(reformat("(a + b) * c"), "(a + b) * c");
  EXPECT_EQ(reformat("a - (b - c)"), "a - (b - c)");
  EXPECT_EQ(reformat("(a - b) - c"), "a - b - c");
}

TEST(Precedence, Connectives) {
  auto e = parse_expr("sensor a logic;\nsensor b logic;\nsensor c logic;\n", "a OR b AND c IMPLIES a");
  const auto& top = std::get<Binary>(e->node);
  EXPECT_EQ(top.op, BinaryOp::Implies);
  const auto& lhs = std::get<Binary>(top.lhs->node);
  EXPECT_EQ(lhs.op, BinaryOp::Or);
  EXPECT_EQ(std::get<Binary>(lhs.rhs->node).op, BinaryOp::And);
}

TEST(Precedence, ImpliesIsRightAssociative) {
  auto e = parse_expr("sensor a logic;\nsensor b logic;\n", "a IMPLIES b IMPLIES a");
  const auto& top = std::get<Binary>(e->node);
  EXPECT_EQ(std::get<Ref>(top.lhs->node).name, "a");
  EXPECT_EQ(std::get<Binary>(top.rhs->node).op, BinaryOp::Implies);
}

TEST(Precedence, NotBindsTightest) {
  auto e = parse_expr("sensor a logic;\nsensor b logic;\n", "NOT a AND b");
  EXPECT_EQ(std::get<Binary>(e->node).op, BinaryOp::And);
}

TEST(Precedence, DanglingElseBindsInnermost) {
  auto e = parse_expr("sensor a logic;\nsensor b logic;\n", "IF a THEN IF b THEN a ELSE b");
  const auto& outer = std::get<IfThenElse>(e->node);
  EXPECT_FALSE(outer.else_branch);
  EXPECT_TRUE(std::get<IfThenElse>(outer.then_branch->node).else_branch);
}

TEST(Precedence, NegativeLiterals) {
  auto e = parse_expr("sensor a numeric;\n", "a - -2");
  const auto& b = std::get<Binary>(e->node);
  EXPECT_EQ(b.op, BinaryOp::Sub);
  EXPECT_EQ(std::get<NumberLit>(b.rhs->node).value, -2.0);
  EXPECT_EQ(std::get<NumberLit>(parse_expr("sensor a numeric;\n", "-1.5e2")->node).value, -150.0);
}

struct BadCase {
  const char* text;
  const char* message;
};

class Diagnostics_ : public ::testing::TestWithParam<BadCase> {};

TEST_P(Diagnostics_, ReportsError) {
  auto r = parse_spec(GetParam().text, "bad.nav");
  EXPECT_FALSE(r.ok());
  ASSERT_FALSE(r.diagnostics.empty());
  EXPECT_NE(r.diagnostics[0].message.find(GetParam().message), std::string::npos) << r.diagnostics[0].message;
  EXPECT_EQ(r.diagnostics[0].span.file_name(), "bad.nav");
  EXPECT_GE(r.diagnostics[0].span.line, 1);
}

INSTANTIATE_TEST_SUITE_P(
    Parser, Diagnostics_,
    ::testing::Values(BadCase{"rule R context(a) { a + }", "operator '+' is missing its right operand"},
                      BadCase{"rule R context(a) { a AND IF a THEN a }", "must be parenthesized"},
                      BadCase{"rule R context(a) { -(2) < a }", "expected expression"},
                      BadCase{"rule R context(a) { a > 1 a }", "expected '}'"},
                      BadCase{"metric m context(a) { QUANTILE PerDay }", "QUANTILE takes 1"},
                      BadCase{"metric m context(a) { MEDIAN PerDay }", "unknown base aggregate"},
                      BadCase{"metric m context(a) { SUM PerFortnight }", "unknown time filter"},
                      BadCase{"timeroutine T { dayofweek Funday; }", "unknown weekday"},
                      BadCase{"timeroutine T { hour 1; hour 2; }", "given twice"},
                      BadCase{"step 0;", "positive integer"},
                      BadCase{"sensor s numeric;\nsensor s logic;", "duplicate name 's'"},
                      BadCase{"sensor s text;", "expected 'numeric' or 'logic'"},
                      BadCase{"rule R context(a) { a $ 1 }", "unexpected character"},
                      BadCase{"function f context(a) { MAXIMUM() }", "requires at least one argument"}));

TEST(Parser, ErrorPointsAtOperator) {
  auto r = parse_spec("rule R context(a) {\n  a +\n}\n");
  ASSERT_EQ(error_count(r.diagnostics), 1u);
  EXPECT_EQ(r.diagnostics[0].span.line, 2);
  EXPECT_EQ(r.diagnostics[0].span.column, 5);
  EXPECT_EQ(to_string(r.diagnostics[0]).rfind("<input>:2:5: error: ", 0), 0u);
}

TEST(Parser, RecoversAndReportsEveryBrokenStatement) {
  auto r = parse_spec("rule A context(a) { a + }\nsensor ok numeric;\nrule B context(a) { a * }\n");
  EXPECT_EQ(error_count(r.diagnostics), 2u);
}

TEST(RoundTrip, CorpusIsStable) {
  ASSERT_GE(testing::spec_corpus().size(), 20u);
  for (const auto& src : testing::spec_corpus()) {
    Specification first = parse_ok(src);
    std::string text = format_spec(first);
    Specification second = parse_ok(text);
    EXPECT_EQ(first, second) << src << "\n---\n" << text;
    EXPECT_EQ(format_spec(second), text);
  }
}

// Random expression trees survive format -> parse unchanged.
ExprPtr random_expr(std::mt19937& rng, int depth, bool logic) {
  std::uniform_int_distribution<int> pick(0, 9);
  auto leaf = [&]() -> ExprPtr {
    if (logic) {
      int k = pick(rng) % 3;
      if (k == 0) return make_expr(BoolLit{pick(rng) % 2 == 0});
      return make_expr(Ref{k == 1 ? "p" : "q"});
    }
    int k = pick(rng) % 3;
    if (k == 0) return make_expr(NumberLit{static_cast<double>(pick(rng)) - 4.5});
    return make_expr(Ref{k == 1 ? "a" : "b"});
  };
  if (depth == 0) return leaf();
  int k = pick(rng);
  if (logic) {
    static const BinaryOp ops[] = {BinaryOp::And, BinaryOp::Or, BinaryOp::Implies};
    static const BinaryOp cmp[] = {BinaryOp::Lt, BinaryOp::Le, BinaryOp::Gt, BinaryOp::Ge, BinaryOp::Eq, BinaryOp::Ne};
    if (k < 3) return make_expr(Binary{ops[k], random_expr(rng, depth - 1, true), random_expr(rng, depth - 1, true)});
    if (k < 5) return make_expr(Binary{cmp[pick(rng) % 6], random_expr(rng, depth - 1, false), random_expr(rng, depth - 1, false)});
    if (k == 5) return make_expr(Unary{UnaryOp::Not, random_expr(rng, depth - 1, true)});
    if (k == 6) {
      ExprPtr els = pick(rng) % 2 ? random_expr(rng, depth - 1, true) : ExprPtr{};
      return make_expr(IfThenElse{random_expr(rng, depth - 1, true), random_expr(rng, depth - 1, true), els});
    }
    return leaf();
  }
  static const BinaryOp ar[] = {BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div};
  if (k < 5) return make_expr(Binary{ar[k % 4], random_expr(rng, depth - 1, false), random_expr(rng, depth - 1, false)});
  if (k == 5) return make_expr(Call{LibraryFn::Maximum, {random_expr(rng, depth - 1, false), leaf()}});
  if (k == 6) {
    return make_expr(IfThenElse{random_expr(rng, depth - 1, true), random_expr(rng, depth - 1, false),
                                random_expr(rng, depth - 1, false)});
  }
  return leaf();
}

TEST(RoundTrip, RandomExpressionsProperty) {
  std::mt19937 rng(2024);
  const std::string decl = "sensor a numeric;\nsensor b numeric;\nsensor p logic;\nsensor q logic;\n";
  for (int i = 0; i < 2000; ++i) {
    bool logic = i % 2 == 0;
    ExprPtr e = random_expr(rng, 1 + i % 5, logic);
    std::string text = format_expr(*e);
    auto r = parse_spec(decl + "function f context(a) { " + text + " }\n");
    ASSERT_TRUE(r.ok()) << text << "\n" << (r.diagnostics.empty() ? "" : r.diagnostics[0].message);
    EXPECT_EQ(std::get<FunctionDef>(*r.spec->find("f")).body, e) << text;
  }
}

}  // namespace
}  // namespace envnav::lang
