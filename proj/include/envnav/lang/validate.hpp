// Name resolution, typing and static checks that gate evaluation.

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>

#include "envnav/lang/ast.hpp"
#include "envnav/lang/diagnostic.hpp"

namespace envnav::lang {

enum class SymbolKind : std::uint8_t { Sensor, Rule, Function, Metric, TimeRoutine, Characteristic };

struct Symbol {
  SymbolKind kind = SymbolKind::Sensor;
  SeriesKind value_kind = SeriesKind::Numeric;
  const ArtifactDef* artifact = nullptr;  // null for sensors
};

// Sensors (catalog plus spec declarations) and artifacts of an expanded spec.
class SymbolTable {
 public:
  SymbolTable(const Specification& spec, std::span<const SensorMeta> catalog);

  const Symbol* find(std::string_view name) const;
  const std::map<std::string, Symbol, std::less<>>& all() const { return symbols_; }

 private:
  std::map<std::string, Symbol, std::less<>> symbols_;
};

// Replaces every TemplateInstance by the artifacts it produces. Problems with
// instances are reported into `diags` and the offending instance is dropped.
Specification expand_instances(const Specification& spec, std::span<const SensorMeta> catalog,
                               Diagnostics& diags);

// Expands instances and checks the result; see the invariants in README.
Diagnostics validate_spec(const Specification& spec, std::span<const SensorMeta> catalog);

}  // namespace envnav::lang
