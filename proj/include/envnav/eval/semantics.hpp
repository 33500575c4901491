// Scalar four-valued semantics.
//
// Connectives: a known operand that decides the result wins (false for AND,
// true for OR). Among the unknown states, undefined outranks missing.
// Arithmetic and comparisons propagate undefined over missing, and division
// by zero is undefined.

#pragma once

#include <span>

#include "envnav/lang/ast.hpp"
#include "envnav/timeseries.hpp"

namespace envnav::eval {

using L = LogicSample;

constexpr L logic_and(L a, L b) {
  if (a == L::False || b == L::False) return L::False;
  if (a == L::Undefined || b == L::Undefined) return L::Undefined;
  if (a == L::Missing || b == L::Missing) return L::Missing;
  return L::True;
}

constexpr L logic_or(L a, L b) {
  if (a == L::True || b == L::True) return L::True;
  if (a == L::Undefined || b == L::Undefined) return L::Undefined;
  if (a == L::Missing || b == L::Missing) return L::Missing;
  return L::False;
}

constexpr L logic_not(L a) {
  if (a == L::True) return L::False;
  if (a == L::False) return L::True;
  return a;
}

constexpr L logic_implies(L a, L b) { return logic_or(logic_not(a), b); }

template <class T>
constexpr T select(L cond, T then_v, T else_v, T missing_v, T undefined_v) {
  switch (cond) {
    case L::True: return then_v;
    case L::False: return else_v;
    case L::Missing: return missing_v;
    default: return undefined_v;
  }
}

constexpr L logic_ite(L c, L a, L b) { return select(c, a, b, L::Missing, L::Undefined); }

inline NumericSample numeric_ite(L c, NumericSample a, NumericSample b) {
  return select(c, a, b, NumericSample::missing(), NumericSample::undefined());
}

enum class LogicOp : std::uint8_t { And, Or, Not, Implies, Ite };

// Throws std::invalid_argument when the operand count does not fit `op`
// (NOT 1, AND/OR/IMPLIES 2, ITE 3).
L combine_logic(LogicOp op, std::span<const L> operands);

inline NumericSample arith(lang::BinaryOp op, NumericSample a, NumericSample b) {
  if (a.is_undefined() || b.is_undefined()) return NumericSample::undefined();
  if (a.is_missing() || b.is_missing()) return NumericSample::missing();
  double x = a.value(), y = b.value();
  switch (op) {
    case lang::BinaryOp::Add: return NumericSample::of(x + y);
    case lang::BinaryOp::Sub: return NumericSample::of(x - y);
    case lang::BinaryOp::Mul: return NumericSample::of(x * y);
    case lang::BinaryOp::Div: return y == 0.0 ? NumericSample::undefined() : NumericSample::of(x / y);
    default: return NumericSample::undefined();
  }
}

inline L compare(lang::BinaryOp op, NumericSample a, NumericSample b) {
  if (a.is_undefined() || b.is_undefined()) return L::Undefined;
  if (a.is_missing() || b.is_missing()) return L::Missing;
  double x = a.value(), y = b.value();
  switch (op) {
    case lang::BinaryOp::Lt: return to_logic(x < y);
    case lang::BinaryOp::Le: return to_logic(x <= y);
    case lang::BinaryOp::Gt: return to_logic(x > y);
    case lang::BinaryOp::Ge: return to_logic(x >= y);
    case lang::BinaryOp::Eq: return to_logic(x == y);
    case lang::BinaryOp::Ne: return to_logic(x != y);
    default: return L::Undefined;
  }
}

// == and != over logic operands.
constexpr L compare_logic(lang::BinaryOp op, L a, L b) {
  if (a == L::Undefined || b == L::Undefined) return L::Undefined;
  if (a == L::Missing || b == L::Missing) return L::Missing;
  bool eq = a == b;
  return to_logic(op == lang::BinaryOp::Eq ? eq : !eq);
}

inline L apply_logic(lang::BinaryOp op, L a, L b) {
  switch (op) {
    case lang::BinaryOp::And: return logic_and(a, b);
    case lang::BinaryOp::Or: return logic_or(a, b);
    case lang::BinaryOp::Implies: return logic_implies(a, b);
    default: return compare_logic(op, a, b);
  }
}

// Pointwise MAXIMUM/MINIMUM/SUM/AVERAGE with arithmetic propagation.
NumericSample library_call(lang::LibraryFn fn, std::span<const NumericSample> args);

}  // namespace envnav::eval
