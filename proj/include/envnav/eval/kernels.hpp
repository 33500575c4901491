// Column kernels: element-wise evaluation over whole grids.
//
// Each kernel has a plain serial implementation (the reference, see
// kernels_serial.cpp) and an OpenMP one (kernels_omp.cpp). Both apply the same
// scalar semantics, so their outputs must agree bit for bit.

#pragma once

#include <cstddef>
#include <span>

#include "envnav/eval/semantics.hpp"

namespace envnav::kernels {

enum class Backend : std::uint8_t { Serial, OpenMP };

using Logic = std::span<const LogicSample>;
using Numeric = std::span<const NumericSample>;

// AND/OR/IMPLIES and logic ==/!=.
void logic_binary(Backend b, lang::BinaryOp op, Logic lhs, Logic rhs, std::span<LogicSample> out);
void logic_not(Backend b, Logic in, std::span<LogicSample> out);
void arith(Backend b, lang::BinaryOp op, Numeric lhs, Numeric rhs, std::span<NumericSample> out);
void compare(Backend b, lang::BinaryOp op, Numeric lhs, Numeric rhs, std::span<LogicSample> out);
// An empty `otherwise` means the omitted ELSE branch (true).
void ite_logic(Backend b, Logic cond, Logic then_v, Logic otherwise, std::span<LogicSample> out);
void ite_numeric(Backend b, Logic cond, Numeric then_v, Numeric otherwise, std::span<NumericSample> out);
void library(Backend b, lang::LibraryFn fn, std::span<const Numeric> args, std::span<NumericSample> out);
// out[k] = Missing wherever mask[k] != 0.
void mask_missing(Backend b, std::span<const std::uint8_t> mask, std::span<LogicSample> out);

// Generic index loop for kernels that are defined next to their data
// (time routines, envelopes).
template <class F>
void for_each_index(Backend b, std::size_t n, F&& f) {
  auto count = static_cast<std::ptrdiff_t>(n);
  if (b == Backend::OpenMP) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < count; ++k) f(static_cast<std::size_t>(k));
  } else {
    for (std::ptrdiff_t k = 0; k < count; ++k) f(static_cast<std::size_t>(k));
  }
}

}  // namespace envnav::kernels
