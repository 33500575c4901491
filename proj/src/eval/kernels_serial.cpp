// Reference kernels: straightforward loops over the scalar semantics.

#include <vector>

#include "kernels_impl.hpp"

namespace envnav::kernels::serial {

using eval::L;

void logic_binary(lang::BinaryOp op, Logic lhs, Logic rhs, std::span<LogicSample> out) {
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = eval::apply_logic(op, lhs[k], rhs[k]);
}

void logic_not(Logic in, std::span<LogicSample> out) {
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = eval::logic_not(in[k]);
}

void arith(lang::BinaryOp op, Numeric lhs, Numeric rhs, std::span<NumericSample> out) {
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = eval::arith(op, lhs[k], rhs[k]);
}

void compare(lang::BinaryOp op, Numeric lhs, Numeric rhs, std::span<LogicSample> out) {
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = eval::compare(op, lhs[k], rhs[k]);
}

void ite_logic(Logic cond, Logic then_v, Logic otherwise, std::span<LogicSample> out) {
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = eval::logic_ite(cond[k], then_v[k], otherwise.empty() ? L::True : otherwise[k]);
  }
}

void ite_numeric(Logic cond, Numeric then_v, Numeric otherwise, std::span<NumericSample> out) {
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = eval::numeric_ite(cond[k], then_v[k], otherwise[k]);
}

void library(lang::LibraryFn fn, std::span<const Numeric> args, std::span<NumericSample> out) {
  std::vector<NumericSample> row(args.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    for (std::size_t i = 0; i < args.size(); ++i) row[i] = args[i][k];
    out[k] = eval::library_call(fn, row);
  }
}

void mask_missing(std::span<const std::uint8_t> mask, std::span<LogicSample> out) {
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (mask[k]) out[k] = L::Missing;
  }
}

}  // namespace envnav::kernels::serial
