#include "envnav/lang/validate.hpp"

#include <algorithm>
#include <set>

#include "envnav/lang/graph.hpp"
#include "envnav/lang/templates.hpp"

namespace envnav::lang {

namespace {

SymbolKind symbol_kind(ArtifactKind k) {
  switch (k) {
    case ArtifactKind::Rule: return SymbolKind::Rule;
    case ArtifactKind::Function: return SymbolKind::Function;
    case ArtifactKind::Metric: return SymbolKind::Metric;
    case ArtifactKind::TimeRoutine: return SymbolKind::TimeRoutine;
    case ArtifactKind::Characteristic: return SymbolKind::Characteristic;
  }
  return SymbolKind::Rule;
}

std::vector<SensorMeta> full_catalog(const Specification& spec, std::span<const SensorMeta> catalog) {
  std::vector<SensorMeta> out(catalog.begin(), catalog.end());
  for (const auto& s : spec.sensors) {
    bool dup = std::any_of(out.begin(), out.end(), [&](const SensorMeta& m) { return m.id == s.id; });
    if (!dup) out.push_back(SensorMeta{s.id, s.label, s.unit, s.kind});
  }
  return out;
}

std::string kind_name(SeriesKind k) { return std::string(to_string(k)); }

class Checker {
 public:
  Checker(const Specification& spec, const SymbolTable& symbols, Diagnostics& diags)
      : spec_(spec), symbols_(symbols), diags_(diags) {}

  void run() {
    for (const auto& a : spec_.artifacts) {
      std::visit([&](const auto& d) { check(d); }, a);
    }
  }

  const std::set<std::string>& used() const { return used_; }

 private:
  void error(const SourceSpan& sp, std::string msg) { diags_.push_back({Severity::Error, sp, std::move(msg)}); }

  const Symbol* resolve(const std::string& name, const SourceSpan& sp, std::string_view role) {
    const Symbol* s = symbols_.find(name);
    if (!s) {
      error(sp, "unresolved " + std::string(role) + " '" + name + "'");
      return nullptr;
    }
    used_.insert(name);
    return s;
  }

  void check_context(const std::vector<std::string>& context, const SourceSpan& sp) {
    for (const auto& c : context) resolve(c, sp, "context reference");
  }

  std::optional<SeriesKind> type_of(const Expr& e, const std::set<std::string>& context, const std::string& owner) {
    return std::visit(
        [&](const auto& n) -> std::optional<SeriesKind> {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, NumberLit>) {
            return SeriesKind::Numeric;
          } else if constexpr (std::is_same_v<T, BoolLit>) {
            return SeriesKind::Logic;
          } else if constexpr (std::is_same_v<T, Ref>) {
            const Symbol* s = resolve(n.name, e.span, "reference");
            if (!s) return std::nullopt;
            if (s->kind == SymbolKind::Sensor && !context.count(n.name)) {
              error(e.span, "sensor '" + n.name + "' is not in the context of '" + owner + "'");
              return std::nullopt;
            }
            return s->value_kind;
          } else if constexpr (std::is_same_v<T, Unary>) {
            auto k = type_of(*n.operand, context, owner);
            if (k && *k != SeriesKind::Logic) {
              error(n.operand->span, "NOT expects a logic operand, got numeric");
              return std::nullopt;
            }
            return k ? std::optional(SeriesKind::Logic) : std::nullopt;
          } else if constexpr (std::is_same_v<T, Binary>) {
            auto l = type_of(*n.lhs, context, owner);
            auto r = type_of(*n.rhs, context, owner);
            if (!l || !r) return std::nullopt;
            std::string op(spelling(n.op));
            if (is_logic_op(n.op)) {
              if (*l != SeriesKind::Logic || *r != SeriesKind::Logic) {
                error(e.span, op + " expects logic operands, got " + kind_name(*l) + " and " + kind_name(*r));
                return std::nullopt;
              }
              return SeriesKind::Logic;
            }
            if (is_comparison(n.op)) {
              bool eq = n.op == BinaryOp::Eq || n.op == BinaryOp::Ne;
              bool ok = (*l == SeriesKind::Numeric && *r == SeriesKind::Numeric) ||
                        (eq && *l == SeriesKind::Logic && *r == SeriesKind::Logic);
              if (!ok) {
                error(e.span, "'" + op + "' expects numeric operands, got " + kind_name(*l) + " and " + kind_name(*r));
                return std::nullopt;
              }
              return SeriesKind::Logic;
            }
            if (*l != SeriesKind::Numeric || *r != SeriesKind::Numeric) {
              error(e.span, "'" + op + "' expects numeric operands, got " + kind_name(*l) + " and " + kind_name(*r));
              return std::nullopt;
            }
            return SeriesKind::Numeric;
          } else if constexpr (std::is_same_v<T, IfThenElse>) {
            auto c = type_of(*n.cond, context, owner);
            auto t = type_of(*n.then_branch, context, owner);
            std::optional<SeriesKind> el;
            if (n.else_branch) el = type_of(*n.else_branch, context, owner);
            if (c && *c != SeriesKind::Logic) {
              error(n.cond->span, "IF condition must be logic, got numeric");
              return std::nullopt;
            }
            if (!c || !t || (n.else_branch && !el)) return std::nullopt;
            if (!n.else_branch) {
              if (*t != SeriesKind::Logic) {
                error(e.span, "IF without ELSE must have a logic THEN branch");
                return std::nullopt;
              }
              return SeriesKind::Logic;
            }
            if (*t != *el) {
              error(e.span, "IF branches differ in kind: " + kind_name(*t) + " and " + kind_name(*el));
              return std::nullopt;
            }
            return t;
          } else if constexpr (std::is_same_v<T, Call>) {
            bool ok = true;
            for (const auto& a : n.args) {
              auto k = type_of(*a, context, owner);
              if (!k) {
                ok = false;
              } else if (*k != SeriesKind::Numeric) {
                error(a->span, std::string(spelling(n.fn)) + " expects numeric arguments");
                ok = false;
              }
            }
            return ok ? std::optional(SeriesKind::Numeric) : std::nullopt;
          }
        },
        e.node);
  }

  template <class Def>
  void check_body(const Def& d, SeriesKind expected, std::string_view what) {
    check_context(d.context, d.span);
    std::set<std::string> ctx(d.context.begin(), d.context.end());
    auto k = type_of(*d.body, ctx, d.name);
    if (k && *k != expected) {
      error(d.body->span, std::string(what) + " '" + d.name + "' must be " + kind_name(expected) +
                              "-valued, but its body is " + kind_name(*k));
    }
  }

  void check(const RuleDef& r) { check_body(r, SeriesKind::Logic, "rule"); }
  void check(const FunctionDef& f) { check_body(f, SeriesKind::Numeric, "function"); }

  void check(const MetricDef& m) {
    resolve(m.context, m.span, "metric context");
    if (m.base == MetricBase::Quantile && !m.params.empty() && (m.params[0] < 0.0 || m.params[0] > 1.0)) {
      error(m.span, "QUANTILE parameter must lie in [0, 1]");
    }
  }

  void check(const TimeRoutineDef& tr) {
    for (std::size_t i = 0; i < kCalendarFieldCount; ++i) {
      auto f = static_cast<CalendarField>(i);
      const auto& p = tr.field(f);
      if (!p || p->wildcard) continue;
      auto [lo, hi] = calendar_bounds(f);
      for (const auto& r : p->items) {
        if (r.lo < lo || r.lo > hi || r.hi < lo || r.hi > hi) {
          error(tr.span, "time routine '" + tr.name + "': " + std::string(spelling(f)) + " value out of range " +
                             std::to_string(lo) + "-" + std::to_string(hi));
        } else if (r.lo > r.hi) {
          error(tr.span, "time routine '" + tr.name + "': " + std::string(spelling(f)) + " range " +
                             std::to_string(r.lo) + "-" + std::to_string(r.hi) + " is empty");
        }
      }
    }
    auto check_refs = [&](const std::vector<std::string>& names, std::string_view role) {
      for (const auto& n : names) {
        const Symbol* s = resolve(n, tr.span, role);
        if (s && s->kind != SymbolKind::TimeRoutine) {
          error(tr.span, "'" + n + "' in " + std::string(role) + " of '" + tr.name + "' is not a time routine");
        }
      }
    };
    check_refs(tr.includes, "include");
    check_refs(tr.excludes, "exclude");
  }

  void check_points(const CharacteristicDef& c, const std::vector<Point>& pts, std::string_view which) {
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (!(pts[i - 1].x < pts[i].x)) {
        error(c.span, "characteristic '" + c.name + "': " + std::string(which) +
                          " points must be strictly increasing in x");
        return;
      }
    }
  }

  void check(const CharacteristicDef& c) {
    for (const auto* ref : {&c.x_ref, &c.y_ref}) {
      const Symbol* s = resolve(*ref, c.span, "characteristic axis");
      if (s && s->value_kind != SeriesKind::Numeric) {
        error(c.span, "characteristic '" + c.name + "': axis '" + *ref + "' must be numeric");
      }
    }
    if (c.lower.empty() && c.upper.empty()) {
      error(c.span, "characteristic '" + c.name + "' needs a lower or an upper point list");
      return;
    }
    std::size_t before = diags_.size();
    check_points(c, c.lower, "lower");
    check_points(c, c.upper, "upper");
    if (diags_.size() != before || c.lower.empty() || c.upper.empty()) return;
    // Both bounds are piecewise linear, so comparing at every breakpoint
    // inside the shared span is exhaustive.
    double lo = std::max(c.lower.front().x, c.upper.front().x);
    double hi = std::min(c.lower.back().x, c.upper.back().x);
    std::vector<double> xs{lo, hi};
    for (const auto& p : c.lower) xs.push_back(p.x);
    for (const auto& p : c.upper) xs.push_back(p.x);
    for (double x : xs) {
      if (x < lo || x > hi) continue;
      auto l = interpolate(c.lower, x);
      auto u = interpolate(c.upper, x);
      if (l && u && *l > *u) {
        error(c.span, "characteristic '" + c.name + "': lower bound exceeds upper bound at x = " + std::to_string(x));
        return;
      }
    }
  }

  const Specification& spec_;
  const SymbolTable& symbols_;
  Diagnostics& diags_;
  std::set<std::string> used_;
};

void check_templates(const Specification& spec, const SymbolTable& symbols, Diagnostics& diags) {
  for (const auto& t : spec.templates) {
    std::set<std::string> local;
    for (const auto& p : t.params) local.insert(p.name);
    for (const auto& a : t.body) local.insert(name_of(a));
    for (const auto& a : t.body) {
      for (const auto& r : references_of(a)) {
        if (local.count(r)) continue;
        const Symbol* s = symbols.find(r);
        if (!s) {
          diags.push_back({Severity::Error, span_of(a), "template '" + t.name + "': unresolved reference '" + r + "'"});
        } else if (s->kind == SymbolKind::Sensor) {
          diags.push_back({Severity::Error, span_of(a),
                           "template '" + t.name + "' refers to concrete sensor '" + r + "'; use a placeholder"});
        }
      }
    }
  }
}

}  // namespace

SymbolTable::SymbolTable(const Specification& spec, std::span<const SensorMeta> catalog) {
  for (const auto& m : catalog) symbols_[m.id] = Symbol{SymbolKind::Sensor, m.kind, nullptr};
  for (const auto& s : spec.sensors) symbols_[s.id] = Symbol{SymbolKind::Sensor, s.kind, nullptr};
  for (const auto& a : spec.artifacts) {
    symbols_[name_of(a)] = Symbol{symbol_kind(kind_of(a)), result_kind(kind_of(a)), &a};
  }
}

const Symbol* SymbolTable::find(std::string_view name) const {
  auto it = symbols_.find(name);
  return it == symbols_.end() ? nullptr : &it->second;
}

Specification expand_instances(const Specification& spec, std::span<const SensorMeta> catalog, Diagnostics& diags) {
  Specification out = spec;
  out.instances.clear();
  std::vector<SensorMeta> sensors = full_catalog(spec, catalog);
  std::set<std::string> taken;
  for (const auto& s : sensors) taken.insert(s.id);
  for (const auto& a : spec.artifacts) taken.insert(name_of(a));
  for (const auto& t : spec.templates) taken.insert(t.name);
  for (const auto& inst : spec.instances) {
    const TemplateDef* tmpl = spec.find_template(inst.template_name);
    if (!tmpl) {
      diags.push_back({Severity::Error, inst.span, "unknown template '" + inst.template_name + "'"});
      continue;
    }
    std::map<std::string, std::string> bindings;
    bool ok = true;
    for (const auto& [ph, sensor] : inst.bindings) {
      if (!bindings.emplace(ph, sensor).second) {
        diags.push_back({Severity::Error, inst.span, "placeholder '" + ph + "' bound twice"});
        ok = false;
      }
    }
    if (!ok) continue;
    try {
      auto defs = instantiate_template(*tmpl, bindings, inst.prefix, sensors, taken);
      for (auto& d : defs) {
        taken.insert(name_of(d));
        out.artifacts.push_back(std::move(d));
      }
    } catch (const TemplateError& e) {
      diags.push_back({Severity::Error, inst.span, e.what()});
    }
  }
  return out;
}

Diagnostics validate_spec(const Specification& spec, std::span<const SensorMeta> catalog) {
  Diagnostics diags;
  Specification expanded = expand_instances(spec, catalog, diags);

  std::map<std::string, SourceSpan> names;
  std::map<std::string, SeriesKind> catalog_kinds;
  for (const auto& m : catalog) catalog_kinds[m.id] = m.kind;
  auto claim = [&](const std::string& n, const SourceSpan& sp, std::string_view what) {
    if (!is_identifier(n)) diags.push_back({Severity::Error, sp, "'" + n + "' is not a valid identifier"});
    if (!names.emplace(n, sp).second) {
      diags.push_back({Severity::Error, sp, "duplicate name '" + n + "' (" + std::string(what) + ")"});
    }
  };
  for (const auto& s : expanded.sensors) {
    claim(s.id, s.span, "sensor");
    auto it = catalog_kinds.find(s.id);
    if (it != catalog_kinds.end() && it->second != s.kind) {
      diags.push_back({Severity::Error, s.span,
                       "sensor '" + s.id + "' declared " + kind_name(s.kind) + " but catalog says " +
                           kind_name(it->second)});
    }
  }
  for (const auto& a : expanded.artifacts) {
    if (catalog_kinds.count(name_of(a))) {
      diags.push_back({Severity::Error, span_of(a), "artifact '" + name_of(a) + "' shadows a catalog sensor"});
    }
    claim(name_of(a), span_of(a), spelling(kind_of(a)));
  }
  for (const auto& t : expanded.templates) claim(t.name, t.span, "template");

  std::vector<SensorMeta> sensors = full_catalog(expanded, catalog);
  SymbolTable symbols(expanded, sensors);
  Checker checker(expanded, symbols, diags);
  checker.run();
  check_templates(expanded, symbols, diags);

  try {
    build_dependency_graph(expanded);
  } catch (const CycleError& e) {
    const ArtifactDef* first = expanded.find(e.cycle().front());
    diags.push_back({Severity::Error, first ? span_of(*first) : SourceSpan{}, e.what()});
  }

  const auto& used = checker.used();
  for (const auto& s : expanded.sensors) {
    if (!used.count(s.id)) diags.push_back({Severity::Warning, s.span, "sensor '" + s.id + "' is never used"});
  }
  for (const auto& a : expanded.artifacts) {
    if (kind_of(a) == ArtifactKind::TimeRoutine && !used.count(name_of(a))) {
      diags.push_back({Severity::Warning, span_of(a), "time routine '" + name_of(a) + "' is never referenced"});
    }
  }
  std::set<std::string> instantiated;
  for (const auto& inst : spec.instances) instantiated.insert(inst.template_name);
  for (const auto& t : expanded.templates) {
    if (!instantiated.count(t.name)) {
      diags.push_back({Severity::Warning, t.span, "template '" + t.name + "' is never instantiated"});
    }
  }
  return diags;
}

}  // namespace envnav::lang
