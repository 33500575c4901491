#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "envnav/lang/ast.hpp"

namespace envnav::lang {

enum class Severity : std::uint8_t { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  SourceSpan span;
  std::string message;
};

using Diagnostics = std::vector<Diagnostic>;

bool has_errors(const Diagnostics& d);
std::size_t error_count(const Diagnostics& d);

// "file:line:col: error: message"
std::string to_string(const Diagnostic& d);
void print(std::ostream& os, const Diagnostics& d);

}  // namespace envnav::lang
