// Backend-specific kernel entry points; kernels.cpp dispatches between them.

#pragma once

#include "envnav/eval/kernels.hpp"

namespace envnav::kernels {

#define ENVNAV_KERNEL_DECLS                                                                                   \
  void logic_binary(lang::BinaryOp op, Logic lhs, Logic rhs, std::span<LogicSample> out);                    \
  void logic_not(Logic in, std::span<LogicSample> out);                                                      \
  void arith(lang::BinaryOp op, Numeric lhs, Numeric rhs, std::span<NumericSample> out);                     \
  void compare(lang::BinaryOp op, Numeric lhs, Numeric rhs, std::span<LogicSample> out);                     \
  void ite_logic(Logic cond, Logic then_v, Logic otherwise, std::span<LogicSample> out);                     \
  void ite_numeric(Logic cond, Numeric then_v, Numeric otherwise, std::span<NumericSample> out);             \
  void library(lang::LibraryFn fn, std::span<const Numeric> args, std::span<NumericSample> out);             \
  void mask_missing(std::span<const std::uint8_t> mask, std::span<LogicSample> out);

namespace serial {
ENVNAV_KERNEL_DECLS
}
namespace omp {
ENVNAV_KERNEL_DECLS
}

#undef ENVNAV_KERNEL_DECLS

}  // namespace envnav::kernels
