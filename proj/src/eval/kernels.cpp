#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace envnav::kernels {

namespace {

void check(std::size_t n, std::size_t got) {
  if (got != n) throw std::invalid_argument("kernel operand length " + std::to_string(got) + " != " + std::to_string(n));
}

}  // namespace

void logic_binary(Backend b, lang::BinaryOp op, Logic lhs, Logic rhs, std::span<LogicSample> out) {
  check(out.size(), lhs.size());
  check(out.size(), rhs.size());
  b == Backend::OpenMP ? omp::logic_binary(op, lhs, rhs, out) : serial::logic_binary(op, lhs, rhs, out);
}

void logic_not(Backend b, Logic in, std::span<LogicSample> out) {
  check(out.size(), in.size());
  b == Backend::OpenMP ? omp::logic_not(in, out) : serial::logic_not(in, out);
}

void arith(Backend b, lang::BinaryOp op, Numeric lhs, Numeric rhs, std::span<NumericSample> out) {
  check(out.size(), lhs.size());
  check(out.size(), rhs.size());
  b == Backend::OpenMP ? omp::arith(op, lhs, rhs, out) : serial::arith(op, lhs, rhs, out);
}

void compare(Backend b, lang::BinaryOp op, Numeric lhs, Numeric rhs, std::span<LogicSample> out) {
  check(out.size(), lhs.size());
  check(out.size(), rhs.size());
  b == Backend::OpenMP ? omp::compare(op, lhs, rhs, out) : serial::compare(op, lhs, rhs, out);
}

void ite_logic(Backend b, Logic cond, Logic then_v, Logic otherwise, std::span<LogicSample> out) {
  check(out.size(), cond.size());
  check(out.size(), then_v.size());
  if (!otherwise.empty()) check(out.size(), otherwise.size());
  b == Backend::OpenMP ? omp::ite_logic(cond, then_v, otherwise, out)
                       : serial::ite_logic(cond, then_v, otherwise, out);
}

void ite_numeric(Backend b, Logic cond, Numeric then_v, Numeric otherwise, std::span<NumericSample> out) {
  check(out.size(), cond.size());
  check(out.size(), then_v.size());
  check(out.size(), otherwise.size());
  b == Backend::OpenMP ? omp::ite_numeric(cond, then_v, otherwise, out)
                       : serial::ite_numeric(cond, then_v, otherwise, out);
}

void library(Backend b, lang::LibraryFn fn, std::span<const Numeric> args, std::span<NumericSample> out) {
  if (args.empty()) throw std::invalid_argument(std::string(lang::spelling(fn)) + " needs at least one argument");
  for (const auto& a : args) check(out.size(), a.size());
  b == Backend::OpenMP ? omp::library(fn, args, out) : serial::library(fn, args, out);
}

void mask_missing(Backend b, std::span<const std::uint8_t> mask, std::span<LogicSample> out) {
  check(out.size(), mask.size());
  b == Backend::OpenMP ? omp::mask_missing(mask, out) : serial::mask_missing(mask, out);
}

}  // namespace envnav::kernels
