#include "envnav/eval/semantics.hpp"

#include <algorithm>
#include <stdexcept>

namespace envnav::eval {

L combine_logic(LogicOp op, std::span<const L> v) {
  auto need = [&](std::size_t n) {
    if (v.size() != n) {
      throw std::invalid_argument("logic operator expects " + std::to_string(n) + " operands, got " +
                                  std::to_string(v.size()));
    }
  };
  switch (op) {
    case LogicOp::Not: need(1); return logic_not(v[0]);
    case LogicOp::And: need(2); return logic_and(v[0], v[1]);
    case LogicOp::Or: need(2); return logic_or(v[0], v[1]);
    case LogicOp::Implies: need(2); return logic_implies(v[0], v[1]);
    case LogicOp::Ite: need(3); return logic_ite(v[0], v[1], v[2]);
  }
  throw std::invalid_argument("unknown logic operator");
}

NumericSample library_call(lang::LibraryFn fn, std::span<const NumericSample> args) {
  if (args.empty()) throw std::invalid_argument(std::string(lang::spelling(fn)) + " needs at least one argument");
  bool missing = false;
  for (const auto& a : args) {
    if (a.is_undefined()) return NumericSample::undefined();
    missing = missing || a.is_missing();
  }
  if (missing) return NumericSample::missing();
  double acc = args[0].value();
  for (std::size_t i = 1; i < args.size(); ++i) {
    double x = args[i].value();
    switch (fn) {
      case lang::LibraryFn::Maximum: acc = std::max(acc, x); break;
      case lang::LibraryFn::Minimum: acc = std::min(acc, x); break;
      case lang::LibraryFn::Sum:
      case lang::LibraryFn::Average: acc += x; break;
    }
  }
  if (fn == lang::LibraryFn::Average) acc /= static_cast<double>(args.size());
  return NumericSample::of(acc);
}

}  // namespace envnav::eval
