#pragma once

#include <utility>
#include <vector>

#include "envnav/lang/ast.hpp"
#include "envnav/timeseries.hpp"

namespace envnav::eval {

// Lower/upper bounds of a characteristic. Each bound is defined only on the
// x-span of its own point list; elsewhere it is undefined.
class Envelope {
 public:
  Envelope() = default;
  Envelope(std::vector<lang::Point> lower, std::vector<lang::Point> upper);
  explicit Envelope(const lang::CharacteristicDef& def) : Envelope(def.lower, def.upper) {}

  std::pair<NumericSample, NumericSample> bounds(double x) const;

  // Missing beats undefined for the inputs; a violated defined bound is false;
  // no defined bound at x is undefined.
  LogicSample check(NumericSample x, NumericSample y) const;

  const std::vector<lang::Point>& lower() const { return lower_; }
  const std::vector<lang::Point>& upper() const { return upper_; }

 private:
  std::vector<lang::Point> lower_;
  std::vector<lang::Point> upper_;
};

std::pair<NumericSample, NumericSample> envelope_bounds(const Envelope& env, double x);

}  // namespace envnav::eval
