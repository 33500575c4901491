#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "envnav/error.hpp"
#include "envnav/lang/ast.hpp"

namespace envnav::lang {

class CycleError : public Error {
 public:
  explicit CycleError(std::vector<std::string> cycle);
  const std::vector<std::string>& cycle() const { return cycle_; }

 private:
  std::vector<std::string> cycle_;
};

// Edge A -> B iff artifact A references artifact B. Sensors are not nodes.
class DependencyGraph {
 public:
  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::set<std::string>& dependencies(const std::string& name) const;
  bool has_edge(const std::string& from, const std::string& to) const;
  std::size_t edge_count() const;
  // Dependencies before dependents; ties broken by declaration order.
  const std::vector<std::string>& topological_order() const { return order_; }

 private:
  friend DependencyGraph build_dependency_graph(const Specification& spec);
  std::vector<std::string> nodes_;
  std::map<std::string, std::set<std::string>> edges_;
  std::vector<std::string> order_;
};

// Artifact names referenced anywhere in `a` (bodies, contexts, includes, ...).
std::set<std::string> references_of(const ArtifactDef& a);

// Throws CycleError naming the cycle (first node repeated at the end).
DependencyGraph build_dependency_graph(const Specification& spec);

}  // namespace envnav::lang
