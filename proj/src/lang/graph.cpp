#include "envnav/lang/graph.hpp"

#include <algorithm>
#include <functional>

namespace envnav::lang {

namespace {

std::string cycle_message(const std::vector<std::string>& cycle) {
  std::string msg = "reference cycle: ";
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (i) msg += " -> ";
    msg += cycle[i];
  }
  return msg;
}

void collect_refs(const Expr& e, std::set<std::string>& out) {
  if (const auto* r = std::get_if<Ref>(&e.node)) out.insert(r->name);
  for (const Expr* c : children(e)) collect_refs(*c, out);
}

}  // namespace

CycleError::CycleError(std::vector<std::string> cycle) : Error(cycle_message(cycle)), cycle_(std::move(cycle)) {}

const std::set<std::string>& DependencyGraph::dependencies(const std::string& name) const {
  static const std::set<std::string> none;
  auto it = edges_.find(name);
  return it == edges_.end() ? none : it->second;
}

bool DependencyGraph::has_edge(const std::string& from, const std::string& to) const {
  return dependencies(from).count(to) > 0;
}

std::size_t DependencyGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& [_, deps] : edges_) n += deps.size();
  return n;
}

std::set<std::string> references_of(const ArtifactDef& a) {
  std::set<std::string> out;
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, RuleDef> || std::is_same_v<T, FunctionDef>) {
          out.insert(d.context.begin(), d.context.end());
          if (d.body) collect_refs(*d.body, out);
        } else if constexpr (std::is_same_v<T, MetricDef>) {
          out.insert(d.context);
        } else if constexpr (std::is_same_v<T, TimeRoutineDef>) {
          out.insert(d.includes.begin(), d.includes.end());
          out.insert(d.excludes.begin(), d.excludes.end());
        } else if constexpr (std::is_same_v<T, CharacteristicDef>) {
          out.insert(d.x_ref);
          out.insert(d.y_ref);
        }
      },
      a);
  return out;
}

DependencyGraph build_dependency_graph(const Specification& spec) {
  DependencyGraph g;
  std::map<std::string, std::size_t> position;
  for (const auto& a : spec.artifacts) {
    position.emplace(name_of(a), g.nodes_.size());
    g.nodes_.push_back(name_of(a));
  }
  for (const auto& a : spec.artifacts) {
    auto& deps = g.edges_[name_of(a)];
    for (const auto& r : references_of(a)) {
      if (position.count(r)) deps.insert(r);
    }
  }

  enum class Mark { Fresh, Active, Done };
  std::map<std::string, Mark> mark;
  std::vector<std::string> stack;
  std::function<void(const std::string&)> visit = [&](const std::string& n) {
    Mark& m = mark[n];
    if (m == Mark::Done) return;
    if (m == Mark::Active) {
      auto it = std::find(stack.begin(), stack.end(), n);
      std::vector<std::string> cycle(it, stack.end());
      cycle.push_back(n);
      throw CycleError(std::move(cycle));
    }
    m = Mark::Active;
    stack.push_back(n);
    std::vector<std::string> deps(g.edges_[n].begin(), g.edges_[n].end());
    std::sort(deps.begin(), deps.end(),
              [&](const std::string& a, const std::string& b) { return position[a] < position[b]; });
    for (const auto& d : deps) visit(d);
    stack.pop_back();
    mark[n] = Mark::Done;
    g.order_.push_back(n);
  };
  for (const auto& n : g.nodes_) visit(n);
  return g;
}

}  // namespace envnav::lang
