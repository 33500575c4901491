#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "envnav/eval/kernels.hpp"
#include "envnav/lang/ast.hpp"

namespace envnav::eval {

// A time routine with its include/exclude references resolved.
class CompiledRoutine {
 public:
  // `env` supplies the referenced routines. Throws std::invalid_argument on an
  // unknown name or a cyclic reference.
  CompiledRoutine(const lang::TimeRoutineDef& def, const lang::Specification& env);

  // (base OR any include) AND NOT any exclude. A routine that writes no fields
  // but has includes has an empty base, so it is the union of its includes.
  bool matches(const CivilTime& c, int iso_weekday) const;
  bool matches(Timestamp t) const { return matches(t.civil(), t.iso_weekday()); }

 private:
  CompiledRoutine(const lang::TimeRoutineDef& def, const lang::Specification& env,
                  std::vector<std::string>& active);

  bool base(const CivilTime& c, int iso_weekday) const;

  std::array<std::optional<lang::FieldPattern>, lang::kCalendarFieldCount> fields_;
  bool empty_base_ = false;
  std::vector<CompiledRoutine> includes_;
  std::vector<CompiledRoutine> excludes_;
};

// Logic series on `grid`; never missing or undefined.
TimeSeries eval_time_routine(const lang::TimeRoutineDef& tr, const TimeGrid& grid, const lang::Specification& env,
                             kernels::Backend backend = kernels::Backend::OpenMP);

}  // namespace envnav::eval
