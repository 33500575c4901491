#include "envnav/eval/time_routine.hpp"

#include <algorithm>
#include <stdexcept>

namespace envnav::eval {

namespace {

int component(const CivilTime& c, int wd, lang::CalendarField f) {
  switch (f) {
    case lang::CalendarField::Year: return c.year;
    case lang::CalendarField::Month: return c.month;
    case lang::CalendarField::Day: return c.day;
    case lang::CalendarField::DayOfWeek: return wd;
    case lang::CalendarField::Hour: return c.hour;
    case lang::CalendarField::Minute: return c.minute;
    case lang::CalendarField::Second: return c.second;
  }
  return 0;
}

const lang::TimeRoutineDef& lookup(const lang::Specification& env, const std::string& name) {
  const auto* a = env.find(name);
  const auto* tr = a ? std::get_if<lang::TimeRoutineDef>(a) : nullptr;
  if (!tr) throw std::invalid_argument("unknown time routine '" + name + "'");
  return *tr;
}

}  // namespace

CompiledRoutine::CompiledRoutine(const lang::TimeRoutineDef& def, const lang::Specification& env) {
  std::vector<std::string> active;
  *this = CompiledRoutine(def, env, active);
}

CompiledRoutine::CompiledRoutine(const lang::TimeRoutineDef& def, const lang::Specification& env,
                                 std::vector<std::string>& active)
    : fields_(def.fields), empty_base_(!def.declares_fields() && !def.includes.empty()) {
  if (std::find(active.begin(), active.end(), def.name) != active.end()) {
    throw std::invalid_argument("cyclic time routine reference through '" + def.name + "'");
  }
  active.push_back(def.name);
  for (const auto& n : def.includes) includes_.push_back(CompiledRoutine(lookup(env, n), env, active));
  for (const auto& n : def.excludes) excludes_.push_back(CompiledRoutine(lookup(env, n), env, active));
  active.pop_back();
}

bool CompiledRoutine::base(const CivilTime& c, int wd) const {
  if (empty_base_) return false;
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (fields_[i] && !fields_[i]->matches(component(c, wd, static_cast<lang::CalendarField>(i)))) return false;
  }
  return true;
}

bool CompiledRoutine::matches(const CivilTime& c, int wd) const {
  auto hit = [&](const CompiledRoutine& r) { return r.matches(c, wd); };
  bool on = base(c, wd) || std::any_of(includes_.begin(), includes_.end(), hit);
  return on && std::none_of(excludes_.begin(), excludes_.end(), hit);
}

TimeSeries eval_time_routine(const lang::TimeRoutineDef& tr, const TimeGrid& grid, const lang::Specification& env,
                             kernels::Backend backend) {
  CompiledRoutine routine(tr, env);
  std::vector<LogicSample> out(grid.count);
  kernels::for_each_index(backend, grid.count, [&](std::size_t k) { out[k] = to_logic(routine.matches(grid.at(k))); });
  return TimeSeries::logic(grid, std::move(out));
}

}  // namespace envnav::eval
