#include "envnav/lang/ast.hpp"

#include <algorithm>

namespace envnav::lang {

bool operator==(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return a.get() == b.get() || *a == *b;
}

bool is_logic_op(BinaryOp op) { return op == BinaryOp::And || op == BinaryOp::Or || op == BinaryOp::Implies; }

bool is_comparison(BinaryOp op) {
  switch (op) {
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge:
    case BinaryOp::Eq:
    case BinaryOp::Ne: return true;
    default: return false;
  }
}

bool is_arithmetic(BinaryOp op) {
  return op == BinaryOp::Add || op == BinaryOp::Sub || op == BinaryOp::Mul || op == BinaryOp::Div;
}

std::string_view spelling(BinaryOp op) {
  switch (op) {
    case BinaryOp::And: return "AND";
    case BinaryOp::Or: return "OR";
    case BinaryOp::Implies: return "IMPLIES";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
  }
  return "?";
}

std::string_view spelling(LibraryFn fn) {
  switch (fn) {
    case LibraryFn::Maximum: return "MAXIMUM";
    case LibraryFn::Minimum: return "MINIMUM";
    case LibraryFn::Sum: return "SUM";
    case LibraryFn::Average: return "AVERAGE";
  }
  return "?";
}

ExprPtr make_expr(ExprNode node, SourceSpan span) {
  return ExprPtr(std::make_shared<const Expr>(Expr{std::move(node), std::move(span)}));
}

std::vector<const Expr*> children(const Expr& e) {
  std::vector<const Expr*> out;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Unary>) {
          out.push_back(n.operand.get());
        } else if constexpr (std::is_same_v<T, Binary>) {
          out.push_back(n.lhs.get());
          out.push_back(n.rhs.get());
        } else if constexpr (std::is_same_v<T, IfThenElse>) {
          out.push_back(n.cond.get());
          out.push_back(n.then_branch.get());
          if (n.else_branch) out.push_back(n.else_branch.get());
        } else if constexpr (std::is_same_v<T, Call>) {
          for (const auto& a : n.args) out.push_back(a.get());
        }
      },
      e.node);
  return out;
}

std::string_view spelling(MetricBase b) {
  switch (b) {
    case MetricBase::Average: return "AVERAGE";
    case MetricBase::Sum: return "SUM";
    case MetricBase::Maximum: return "MAXIMUM";
    case MetricBase::Minimum: return "MINIMUM";
    case MetricBase::StdDev: return "STDDEV";
    case MetricBase::Quantile: return "QUANTILE";
  }
  return "?";
}

std::size_t parameter_count(MetricBase b) { return b == MetricBase::Quantile ? 1 : 0; }

std::string_view spelling(TimeFilter f) {
  switch (f) {
    case TimeFilter::PerHour: return "PerHour";
    case TimeFilter::PerDay: return "PerDay";
    case TimeFilter::PerWeek: return "PerWeek";
    case TimeFilter::PerMonth: return "PerMonth";
    case TimeFilter::PerQuarter: return "PerQuarter";
    case TimeFilter::PerYear: return "PerYear";
  }
  return "?";
}

std::string_view spelling(CalendarField f) {
  switch (f) {
    case CalendarField::Year: return "year";
    case CalendarField::Month: return "month";
    case CalendarField::Day: return "day";
    case CalendarField::DayOfWeek: return "dayofweek";
    case CalendarField::Hour: return "hour";
    case CalendarField::Minute: return "minute";
    case CalendarField::Second: return "second";
  }
  return "?";
}

std::pair<int, int> calendar_bounds(CalendarField f) {
  switch (f) {
    case CalendarField::Year: return {1, 9999};
    case CalendarField::Month: return {1, 12};
    case CalendarField::Day: return {1, 31};
    case CalendarField::DayOfWeek: return {1, 7};
    case CalendarField::Hour: return {0, 23};
    case CalendarField::Minute: return {0, 59};
    case CalendarField::Second: return {0, 59};
  }
  return {0, 0};
}

bool FieldPattern::matches(int v) const {
  if (wildcard) return true;
  return std::any_of(items.begin(), items.end(), [v](const FieldRange& r) { return v >= r.lo && v <= r.hi; });
}

bool TimeRoutineDef::declares_fields() const {
  return std::any_of(fields.begin(), fields.end(), [](const auto& f) { return f.has_value(); });
}

std::optional<double> interpolate(std::span<const Point> pts, double x) {
  if (pts.empty() || x < pts.front().x || x > pts.back().x) return std::nullopt;
  auto hi = std::lower_bound(pts.begin(), pts.end(), x, [](const Point& p, double v) { return p.x < v; });
  if (hi->x == x) return hi->y;
  auto lo = hi - 1;
  double t = (x - lo->x) / (hi->x - lo->x);
  return lo->y + t * (hi->y - lo->y);
}

const std::string& name_of(const ArtifactDef& a) {
  return std::visit([](const auto& d) -> const std::string& { return d.name; }, a);
}

ArtifactKind kind_of(const ArtifactDef& a) { return static_cast<ArtifactKind>(a.index()); }

const SourceSpan& span_of(const ArtifactDef& a) {
  return std::visit([](const auto& d) -> const SourceSpan& { return d.span; }, a);
}

std::string_view spelling(ArtifactKind k) {
  switch (k) {
    case ArtifactKind::Rule: return "rule";
    case ArtifactKind::Function: return "function";
    case ArtifactKind::Metric: return "metric";
    case ArtifactKind::TimeRoutine: return "timeroutine";
    case ArtifactKind::Characteristic: return "characteristic";
  }
  return "?";
}

SeriesKind result_kind(ArtifactKind k) {
  return (k == ArtifactKind::Function || k == ArtifactKind::Metric) ? SeriesKind::Numeric : SeriesKind::Logic;
}

const ArtifactDef* Specification::find(std::string_view name) const {
  for (const auto& a : artifacts) {
    if (name_of(a) == name) return &a;
  }
  return nullptr;
}

const TemplateDef* Specification::find_template(std::string_view name) const {
  for (const auto& t : templates) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

std::vector<SensorMeta> Specification::sensor_catalog() const {
  std::vector<SensorMeta> out;
  out.reserve(sensors.size());
  for (const auto& s : sensors) out.push_back(SensorMeta{s.id, s.label, s.unit, s.kind});
  return out;
}

Specification merge(std::vector<Specification> parts) {
  Specification out;
  for (auto& p : parts) {
    if (p.step && !out.step) out.step = p.step;
    std::move(p.sensors.begin(), p.sensors.end(), std::back_inserter(out.sensors));
    std::move(p.artifacts.begin(), p.artifacts.end(), std::back_inserter(out.artifacts));
    std::move(p.templates.begin(), p.templates.end(), std::back_inserter(out.templates));
    std::move(p.instances.begin(), p.instances.end(), std::back_inserter(out.instances));
  }
  return out;
}

}  // namespace envnav::lang
