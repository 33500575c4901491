#include <algorithm>
#include <charconv>
#include <ostream>
#include <sstream>

#include "envnav/lang/diagnostic.hpp"
#include "envnav/lang/parser.hpp"

namespace envnav::lang {

bool has_errors(const Diagnostics& d) { return error_count(d) > 0; }

std::size_t error_count(const Diagnostics& d) {
  return static_cast<std::size_t>(
      std::count_if(d.begin(), d.end(), [](const Diagnostic& x) { return x.severity == Severity::Error; }));
}

std::string to_string(const Diagnostic& d) {
  std::ostringstream os;
  std::string file = d.span.file_name();
  os << (file.empty() ? "<input>" : file) << ':' << d.span.line << ':' << d.span.column << ": "
     << (d.severity == Severity::Error ? "error" : "warning") << ": " << d.message;
  return os.str();
}

void print(std::ostream& os, const Diagnostics& d) {
  for (const auto& x : d) os << to_string(x) << '\n';
}

namespace {

// Binding strength, loosest first.
enum Prec : int { kIte = 0, kImplies, kOr, kAnd, kCmp, kAdd, kMul, kNot, kPrimary };

int binary_prec(BinaryOp op) {
  if (op == BinaryOp::Implies) return kImplies;
  if (op == BinaryOp::Or) return kOr;
  if (op == BinaryOp::And) return kAnd;
  if (is_comparison(op)) return kCmp;
  if (op == BinaryOp::Add || op == BinaryOp::Sub) return kAdd;
  return kMul;
}

int prec_of(const Expr& e) {
  return std::visit(
      [](const auto& n) -> int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IfThenElse>) return kIte;
        else if constexpr (std::is_same_v<T, Binary>) return binary_prec(n.op);
        else if constexpr (std::is_same_v<T, Unary>) return kNot;
        else return kPrimary;
      },
      e.node);
}

// An else-less IF at the end of the expression would capture a following ELSE.
bool open_ended(const Expr& e) {
  const auto* ite = std::get_if<IfThenElse>(&e.node);
  if (!ite) return false;
  return !ite->else_branch || open_ended(*ite->else_branch);
}

std::string number(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\', out += c;
    else if (c == '\n') out += "\\n";
    else if (c == '\t') out += "\\t";
    else out += c;
  }
  return out + "\"";
}

void emit(std::string& out, const Expr& e, int required);

void emit_child(std::string& out, const Expr& e, int required) {
  if (prec_of(e) < required) {
    out += '(';
    emit(out, e, kIte);
    out += ')';
  } else {
    emit(out, e, required);
  }
}

void emit(std::string& out, const Expr& e, int required) {
  (void)required;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, NumberLit>) {
          out += number(n.value);
        } else if constexpr (std::is_same_v<T, BoolLit>) {
          out += n.value ? "true" : "false";
        } else if constexpr (std::is_same_v<T, Ref>) {
          out += n.name;
        } else if constexpr (std::is_same_v<T, Unary>) {
          out += "NOT ";
          emit_child(out, *n.operand, kNot);
        } else if constexpr (std::is_same_v<T, Binary>) {
          int p = binary_prec(n.op);
          bool right_assoc = n.op == BinaryOp::Implies;
          emit_child(out, *n.lhs, right_assoc ? p + 1 : p);
          out += ' ';
          out += spelling(n.op);
          out += ' ';
          emit_child(out, *n.rhs, right_assoc ? p : p + 1);
        } else if constexpr (std::is_same_v<T, IfThenElse>) {
          out += "IF ";
          emit_child(out, *n.cond, kImplies);
          out += " THEN ";
          emit_child(out, *n.then_branch, (n.else_branch && open_ended(*n.then_branch)) ? kImplies : kIte);
          if (n.else_branch) {
            out += " ELSE ";
            emit_child(out, *n.else_branch, kIte);
          }
        } else if constexpr (std::is_same_v<T, Call>) {
          out += spelling(n.fn);
          out += '(';
          for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i) out += ", ";
            emit_child(out, *n.args[i], kIte);
          }
          out += ')';
        }
      },
      e.node);
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += v[i];
  }
  return out;
}

std::string weekday_name(int d) {
  static const char* names[] = {"Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"};
  return (d >= 1 && d <= 7) ? names[d - 1] : std::to_string(d);
}

std::string pattern_text(CalendarField f, const FieldPattern& p) {
  if (p.wildcard) return "*";
  auto value = [f](int v) { return f == CalendarField::DayOfWeek ? weekday_name(v) : std::to_string(v); };
  std::string out;
  for (std::size_t i = 0; i < p.items.size(); ++i) {
    if (i) out += ", ";
    out += value(p.items[i].lo);
    if (p.items[i].hi != p.items[i].lo) out += "-" + value(p.items[i].hi);
  }
  return out;
}

std::string points_text(const std::vector<Point>& pts) {
  std::string out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out += i ? ", (" : "(";
    out += number(pts[i].x) + ", " + number(pts[i].y) + ")";
  }
  return out;
}

void emit_artifact(std::string& out, const ArtifactDef& a, const std::string& ind) {
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, RuleDef> || std::is_same_v<T, FunctionDef>) {
          out += ind + (std::is_same_v<T, RuleDef> ? "rule " : "function ") + d.name + " context(" + join(d.context) +
                 ") {\n";
          out += ind + "  " + format_expr(*d.body) + "\n" + ind + "}\n";
        } else if constexpr (std::is_same_v<T, MetricDef>) {
          out += ind + "metric " + d.name + " context(" + d.context + ") { " + std::string(spelling(d.base));
          if (!d.params.empty()) {
            out += '(';
            for (std::size_t i = 0; i < d.params.size(); ++i) out += (i ? ", " : "") + number(d.params[i]);
            out += ')';
          }
          out += " " + std::string(spelling(d.filter)) + " }\n";
        } else if constexpr (std::is_same_v<T, TimeRoutineDef>) {
          out += ind + "timeroutine " + d.name + " {\n";
          for (std::size_t i = 0; i < kCalendarFieldCount; ++i) {
            auto f = static_cast<CalendarField>(i);
            if (const auto& p = d.field(f)) {
              out += ind + "  " + std::string(spelling(f)) + " " + pattern_text(f, *p) + ";\n";
            }
          }
          if (!d.includes.empty()) out += ind + "  include " + join(d.includes) + ";\n";
          if (!d.excludes.empty()) out += ind + "  exclude " + join(d.excludes) + ";\n";
          out += ind + "}\n";
        } else if constexpr (std::is_same_v<T, CharacteristicDef>) {
          out += ind + "characteristic " + d.name + " x(" + d.x_ref + ") y(" + d.y_ref + ") {\n";
          if (!d.lower.empty()) out += ind + "  lower " + points_text(d.lower) + ";\n";
          if (!d.upper.empty()) out += ind + "  upper " + points_text(d.upper) + ";\n";
          out += ind + "}\n";
        }
      },
      a);
}

}  // namespace

std::string format_expr(const Expr& e) {
  std::string out;
  emit(out, e, kIte);
  return out;
}

std::string format_spec(const Specification& spec) {
  std::vector<std::string> blocks;
  if (spec.step) blocks.push_back("step " + std::to_string(*spec.step) + ";\n");
  if (!spec.sensors.empty()) {
    std::string b;
    for (const auto& s : spec.sensors) {
      b += "sensor " + s.id + " " + std::string(to_string(s.kind));
      if (!s.label.empty()) b += " label " + quoted(s.label);
      if (!s.unit.empty()) b += " unit " + quoted(s.unit);
      b += ";\n";
    }
    blocks.push_back(std::move(b));
  }
  for (const auto& a : spec.artifacts) {
    std::string b;
    emit_artifact(b, a, "");
    blocks.push_back(std::move(b));
  }
  for (const auto& t : spec.templates) {
    std::string b = "template " + t.name + "(";
    for (std::size_t i = 0; i < t.params.size(); ++i) {
      if (i) b += ", ";
      b += t.params[i].name + ": " + std::string(to_string(t.params[i].kind));
    }
    b += ") {\n";
    for (const auto& a : t.body) emit_artifact(b, a, "  ");
    b += "}\n";
    blocks.push_back(std::move(b));
  }
  if (!spec.instances.empty()) {
    std::string b;
    for (const auto& inst : spec.instances) {
      b += "instance " + inst.template_name + "(";
      for (std::size_t i = 0; i < inst.bindings.size(); ++i) {
        if (i) b += ", ";
        b += inst.bindings[i].first + " = " + inst.bindings[i].second;
      }
      b += ") prefix " + quoted(inst.prefix) + ";\n";
    }
    blocks.push_back(std::move(b));
  }
  std::string out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i) out += '\n';
    out += blocks[i];
  }
  return out;
}

}  // namespace envnav::lang
