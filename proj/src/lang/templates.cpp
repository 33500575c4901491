#include "envnav/lang/templates.hpp"

#include <algorithm>

namespace envnav::lang {

namespace {

class Renamer {
 public:
  explicit Renamer(std::map<std::string, std::string> table) : table_(std::move(table)) {}

  std::string name(const std::string& n) const {
    auto it = table_.find(n);
    return it == table_.end() ? n : it->second;
  }

  std::vector<std::string> names(const std::vector<std::string>& v) const {
    std::vector<std::string> out;
    out.reserve(v.size());
    for (const auto& n : v) out.push_back(name(n));
    return out;
  }

  ExprPtr expr(const ExprPtr& e) const {
    if (!e) return e;
    return std::visit(
        [&](const auto& n) -> ExprPtr {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Ref>) {
            return make_expr(Ref{name(n.name)}, e->span);
          } else if constexpr (std::is_same_v<T, Unary>) {
            return make_expr(Unary{n.op, expr(n.operand)}, e->span);
          } else if constexpr (std::is_same_v<T, Binary>) {
            return make_expr(Binary{n.op, expr(n.lhs), expr(n.rhs)}, e->span);
          } else if constexpr (std::is_same_v<T, IfThenElse>) {
            return make_expr(IfThenElse{expr(n.cond), expr(n.then_branch), expr(n.else_branch)}, e->span);
          } else if constexpr (std::is_same_v<T, Call>) {
            Call c{n.fn, {}};
            for (const auto& a : n.args) c.args.push_back(expr(a));
            return make_expr(std::move(c), e->span);
          } else {
            return e;
          }
        },
        e->node);
  }

  ArtifactDef artifact(const ArtifactDef& a) const {
    return std::visit(
        [&](const auto& d) -> ArtifactDef {
          using T = std::decay_t<decltype(d)>;
          T out = d;
          out.name = name(d.name);
          if constexpr (std::is_same_v<T, RuleDef> || std::is_same_v<T, FunctionDef>) {
            out.context = names(d.context);
            out.body = expr(d.body);
          } else if constexpr (std::is_same_v<T, MetricDef>) {
            out.context = name(d.context);
          } else if constexpr (std::is_same_v<T, TimeRoutineDef>) {
            out.includes = names(d.includes);
            out.excludes = names(d.excludes);
          } else if constexpr (std::is_same_v<T, CharacteristicDef>) {
            out.x_ref = name(d.x_ref);
            out.y_ref = name(d.y_ref);
          }
          return out;
        },
        a);
  }

 private:
  std::map<std::string, std::string> table_;
};

}  // namespace

std::vector<ArtifactDef> instantiate_template(const TemplateDef& tmpl,
                                              const std::map<std::string, std::string>& bindings,
                                              std::string_view name_prefix, std::span<const SensorMeta> catalog,
                                              const std::set<std::string>& taken) {
  std::map<std::string, std::string> table;
  for (const auto& [ph, _] : bindings) {
    bool known = std::any_of(tmpl.params.begin(), tmpl.params.end(), [&](const Placeholder& p) { return p.name == ph; });
    if (!known) throw TemplateError("template '" + tmpl.name + "' has no placeholder '" + ph + "'");
  }
  for (const auto& p : tmpl.params) {
    auto it = bindings.find(p.name);
    if (it == bindings.end()) {
      throw TemplateError("template '" + tmpl.name + "': placeholder '" + p.name + "' is not bound");
    }
    auto sensor = std::find_if(catalog.begin(), catalog.end(), [&](const SensorMeta& m) { return m.id == it->second; });
    if (sensor == catalog.end()) {
      throw TemplateError("template '" + tmpl.name + "': placeholder '" + p.name + "' bound to unknown sensor '" +
                          it->second + "'");
    }
    if (sensor->kind != p.kind) {
      throw TemplateError("template '" + tmpl.name + "': placeholder '" + p.name + "' expects a " +
                          std::string(to_string(p.kind)) + " sensor but '" + it->second + "' is " +
                          std::string(to_string(sensor->kind)));
    }
    table[p.name] = it->second;
  }
  std::string prefix(name_prefix);
  for (const auto& a : tmpl.body) {
    std::string full = prefix + name_of(a);
    if (!is_identifier(full)) throw TemplateError("prefixed name '" + full + "' is not a valid identifier");
    if (taken.count(full)) throw TemplateError("name collision: '" + full + "' already exists");
    table[name_of(a)] = full;
  }
  Renamer renamer(std::move(table));
  std::vector<ArtifactDef> out;
  out.reserve(tmpl.body.size());
  for (const auto& a : tmpl.body) out.push_back(renamer.artifact(a));
  return out;
}

}  // namespace envnav::lang
