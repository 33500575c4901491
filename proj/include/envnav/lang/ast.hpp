// Syntax tree of the constraint language.
//
// Every node type has a defaulted operator== that gives structural equality.
// SourceSpan always compares equal, so spans never affect that comparison.

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "envnav/timeseries.hpp"

namespace envnav::lang {

struct SourceSpan {
  std::shared_ptr<const std::string> file;
  int line = 0;  // 1-based; 0 = synthesized
  int column = 0;
  int end_line = 0;
  int end_column = 0;

  std::string file_name() const { return file ? *file : std::string{}; }
  friend bool operator==(const SourceSpan&, const SourceSpan&) { return true; }
};

enum class UnaryOp : std::uint8_t { Not };

enum class BinaryOp : std::uint8_t {
  And, Or, Implies,
  Lt, Le, Gt, Ge, Eq, Ne,
  Add, Sub, Mul, Div,
};

// Pointwise library functions usable in expressions.
enum class LibraryFn : std::uint8_t { Maximum, Minimum, Sum, Average };

bool is_logic_op(BinaryOp op);
bool is_comparison(BinaryOp op);
bool is_arithmetic(BinaryOp op);
std::string_view spelling(BinaryOp op);
std::string_view spelling(LibraryFn fn);

struct Expr;

// Immutable shared subtree with deep equality.
class ExprPtr {
 public:
  ExprPtr() = default;
  explicit ExprPtr(std::shared_ptr<const Expr> p) : p_(std::move(p)) {}

  const Expr& operator*() const { return *p_; }
  const Expr* operator->() const { return p_.get(); }
  const Expr* get() const { return p_.get(); }
  explicit operator bool() const { return static_cast<bool>(p_); }

  friend bool operator==(const ExprPtr& a, const ExprPtr& b);

 private:
  std::shared_ptr<const Expr> p_;
};

struct NumberLit {
  double value = 0.0;
  friend bool operator==(const NumberLit&, const NumberLit&) = default;
};

struct BoolLit {
  bool value = false;
  friend bool operator==(const BoolLit&, const BoolLit&) = default;
};

// Sensor or artifact reference; which one is decided during resolution.
struct Ref {
  std::string name;
  friend bool operator==(const Ref&, const Ref&) = default;
};

struct Unary {
  UnaryOp op = UnaryOp::Not;
  ExprPtr operand;
  friend bool operator==(const Unary&, const Unary&) = default;
};

struct Binary {
  BinaryOp op = BinaryOp::And;
  ExprPtr lhs;
  ExprPtr rhs;
  friend bool operator==(const Binary&, const Binary&) = default;
};

struct IfThenElse {
  ExprPtr cond;
  ExprPtr then_branch;
  ExprPtr else_branch;  // null when omitted
  friend bool operator==(const IfThenElse&, const IfThenElse&) = default;
};

struct Call {
  LibraryFn fn = LibraryFn::Maximum;
  std::vector<ExprPtr> args;
  friend bool operator==(const Call&, const Call&) = default;
};

using ExprNode = std::variant<NumberLit, BoolLit, Ref, Unary, Binary, IfThenElse, Call>;

struct Expr {
  ExprNode node;
  SourceSpan span;
  friend bool operator==(const Expr&, const Expr&) = default;
};

ExprPtr make_expr(ExprNode node, SourceSpan span = {});

// Children in positional order (the order used for sub-expression paths).
std::vector<const Expr*> children(const Expr& e);

struct SensorDecl {
  std::string id;
  SeriesKind kind = SeriesKind::Numeric;
  std::string label;
  std::string unit;
  SourceSpan span;
  friend bool operator==(const SensorDecl&, const SensorDecl&) = default;
};

struct RuleDef {
  std::string name;
  std::vector<std::string> context;
  ExprPtr body;
  SourceSpan span;
  friend bool operator==(const RuleDef&, const RuleDef&) = default;
};

struct FunctionDef {
  std::string name;
  std::vector<std::string> context;
  ExprPtr body;
  SourceSpan span;
  friend bool operator==(const FunctionDef&, const FunctionDef&) = default;
};

enum class MetricBase : std::uint8_t { Average, Sum, Maximum, Minimum, StdDev, Quantile };
enum class TimeFilter : std::uint8_t { PerHour, PerDay, PerWeek, PerMonth, PerQuarter, PerYear };

std::string_view spelling(MetricBase b);
std::string_view spelling(TimeFilter f);
// Number of parameters the base aggregate takes.
std::size_t parameter_count(MetricBase b);

struct MetricDef {
  std::string name;
  std::string context;
  MetricBase base = MetricBase::Average;
  std::vector<double> params;
  TimeFilter filter = TimeFilter::PerHour;
  SourceSpan span;
  friend bool operator==(const MetricDef&, const MetricDef&) = default;
};

enum class CalendarField : std::uint8_t { Year, Month, Day, DayOfWeek, Hour, Minute, Second };
inline constexpr std::size_t kCalendarFieldCount = 7;

std::string_view spelling(CalendarField f);
// Inclusive bounds of legal values; day of week runs 1 (Monday) .. 7 (Sunday).
std::pair<int, int> calendar_bounds(CalendarField f);

struct FieldRange {
  int lo = 0;
  int hi = 0;
  friend bool operator==(const FieldRange&, const FieldRange&) = default;
};

// `*` or a set of values and inclusive ranges.
struct FieldPattern {
  bool wildcard = true;
  std::vector<FieldRange> items;
  bool matches(int v) const;
  friend bool operator==(const FieldPattern&, const FieldPattern&) = default;
};

struct TimeRoutineDef {
  std::string name;
  // nullopt: field not written; it matches everything.
  std::array<std::optional<FieldPattern>, kCalendarFieldCount> fields;
  std::vector<std::string> includes;
  std::vector<std::string> excludes;
  SourceSpan span;

  const std::optional<FieldPattern>& field(CalendarField f) const { return fields[static_cast<std::size_t>(f)]; }
  std::optional<FieldPattern>& field(CalendarField f) { return fields[static_cast<std::size_t>(f)]; }
  bool declares_fields() const;
  friend bool operator==(const TimeRoutineDef&, const TimeRoutineDef&) = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct CharacteristicDef {
  std::string name;
  std::string x_ref;
  std::string y_ref;
  std::vector<Point> lower;
  std::vector<Point> upper;
  SourceSpan span;
  friend bool operator==(const CharacteristicDef&, const CharacteristicDef&) = default;
};

// Piecewise-linear value of an x-sorted point list; nullopt outside its x-span.
std::optional<double> interpolate(std::span<const Point> pts, double x);

using ArtifactDef = std::variant<RuleDef, FunctionDef, MetricDef, TimeRoutineDef, CharacteristicDef>;

enum class ArtifactKind : std::uint8_t { Rule, Function, Metric, TimeRoutine, Characteristic };

const std::string& name_of(const ArtifactDef& a);
ArtifactKind kind_of(const ArtifactDef& a);
const SourceSpan& span_of(const ArtifactDef& a);
std::string_view spelling(ArtifactKind k);
// Logic for rules/routines/characteristics, numeric for functions/metrics.
SeriesKind result_kind(ArtifactKind k);

struct Placeholder {
  std::string name;
  SeriesKind kind = SeriesKind::Numeric;
  friend bool operator==(const Placeholder&, const Placeholder&) = default;
};

struct TemplateDef {
  std::string name;
  std::vector<Placeholder> params;
  std::vector<ArtifactDef> body;
  SourceSpan span;
  friend bool operator==(const TemplateDef&, const TemplateDef&) = default;
};

struct TemplateInstance {
  std::string template_name;
  std::vector<std::pair<std::string, std::string>> bindings;  // placeholder -> sensor id
  std::string prefix;
  SourceSpan span;
  friend bool operator==(const TemplateInstance&, const TemplateInstance&) = default;
};

struct Specification {
  std::optional<Seconds> step;
  std::vector<SensorDecl> sensors;
  std::vector<ArtifactDef> artifacts;
  std::vector<TemplateDef> templates;
  std::vector<TemplateInstance> instances;

  bool empty() const {
    return !step && sensors.empty() && artifacts.empty() && templates.empty() && instances.empty();
  }
  const ArtifactDef* find(std::string_view name) const;
  const TemplateDef* find_template(std::string_view name) const;
  std::vector<SensorMeta> sensor_catalog() const;

  friend bool operator==(const Specification&, const Specification&) = default;
};

// Concatenates several parsed files; name clashes are left to the validator.
Specification merge(std::vector<Specification> parts);

}  // namespace envnav::lang
