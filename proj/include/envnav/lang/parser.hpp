// Parser and canonical formatter for `.nav` specification sources.

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "envnav/lang/ast.hpp"
#include "envnav/lang/diagnostic.hpp"

namespace envnav::lang {

struct ParseResult {
  std::optional<Specification> spec;  // set iff no error diagnostics
  Diagnostics diagnostics;

  bool ok() const { return spec.has_value(); }
};

// Accepts LF and CRLF line endings. `file` is only used in diagnostics.
ParseResult parse_spec(std::string_view text, std::string file = {});

std::string format_spec(const Specification& spec);
std::string format_expr(const Expr& e);

}  // namespace envnav::lang
