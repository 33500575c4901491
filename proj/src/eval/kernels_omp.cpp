// OpenMP kernels. Static scheduling over contiguous chunks; every element is
// written by exactly one thread.

#include <vector>

#include "kernels_impl.hpp"

namespace envnav::kernels::omp {

using eval::L;

namespace {

std::ptrdiff_t ssize(std::size_t n) { return static_cast<std::ptrdiff_t>(n); }

}  // namespace

void logic_binary(lang::BinaryOp op, Logic lhs, Logic rhs, std::span<LogicSample> out) {
  const auto n = ssize(out.size());
  switch (op) {
    case lang::BinaryOp::And:
#pragma omp parallel for simd schedule(static)
      for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = eval::logic_and(lhs[k], rhs[k]);
      break;
    case lang::BinaryOp::Or:
#pragma omp parallel for simd schedule(static)
      for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = eval::logic_or(lhs[k], rhs[k]);
      break;
    case lang::BinaryOp::Implies:
#pragma omp parallel for simd schedule(static)
      for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = eval::logic_implies(lhs[k], rhs[k]);
      break;
    default:
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = eval::compare_logic(op, lhs[k], rhs[k]);
  }
}

void logic_not(Logic in, std::span<LogicSample> out) {
  const auto n = ssize(out.size());
#pragma omp parallel for simd schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = eval::logic_not(in[k]);
}

void arith(lang::BinaryOp op, Numeric lhs, Numeric rhs, std::span<NumericSample> out) {
  const auto n = ssize(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = eval::arith(op, lhs[k], rhs[k]);
}

void compare(lang::BinaryOp op, Numeric lhs, Numeric rhs, std::span<LogicSample> out) {
  const auto n = ssize(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = eval::compare(op, lhs[k], rhs[k]);
}

void ite_logic(Logic cond, Logic then_v, Logic otherwise, std::span<LogicSample> out) {
  const auto n = ssize(out.size());
  if (otherwise.empty()) {
#pragma omp parallel for simd schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = eval::logic_ite(cond[k], then_v[k], L::True);
  } else {
#pragma omp parallel for simd schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = eval::logic_ite(cond[k], then_v[k], otherwise[k]);
  }
}

void ite_numeric(Logic cond, Numeric then_v, Numeric otherwise, std::span<NumericSample> out) {
  const auto n = ssize(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = eval::numeric_ite(cond[k], then_v[k], otherwise[k]);
}

void library(lang::LibraryFn fn, std::span<const Numeric> args, std::span<NumericSample> out) {
  const auto n = ssize(out.size());
#pragma omp parallel
  {
    std::vector<NumericSample> row(args.size());
#pragma omp for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < args.size(); ++i) row[i] = args[i][k];
      out[k] = eval::library_call(fn, row);
    }
  }
}

void mask_missing(std::span<const std::uint8_t> mask, std::span<LogicSample> out) {
  const auto n = ssize(out.size());
#pragma omp parallel for simd schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = mask[k] ? L::Missing : out[k];
}

}  // namespace envnav::kernels::omp
