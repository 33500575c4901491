#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "envnav/error.hpp"
#include "envnav/lang/ast.hpp"

namespace envnav::lang {

class TemplateError : public Error {
 public:
  using Error::Error;
};

// Substitutes bound sensor ids for placeholders and prefixes every artifact
// defined in the template body. References to artifacts outside the template
// are kept as written. `taken` holds names already in use in the workspace.
// Throws TemplateError on an unbound or unknown placeholder, a kind mismatch
// against `catalog`, or a name collision.
std::vector<ArtifactDef> instantiate_template(const TemplateDef& tmpl,
                                              const std::map<std::string, std::string>& bindings,
                                              std::string_view name_prefix, std::span<const SensorMeta> catalog,
                                              const std::set<std::string>& taken = {});

}  // namespace envnav::lang
