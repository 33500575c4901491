#include "envnav/eval/envelope.hpp"

namespace envnav::eval {

namespace {

NumericSample bound(const std::vector<lang::Point>& pts, double x) {
  auto y = lang::interpolate(pts, x);
  return y ? NumericSample::of(*y) : NumericSample::undefined();
}

}  // namespace

Envelope::Envelope(std::vector<lang::Point> lower, std::vector<lang::Point> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {}

std::pair<NumericSample, NumericSample> Envelope::bounds(double x) const { return {bound(lower_, x), bound(upper_, x)}; }

LogicSample Envelope::check(NumericSample x, NumericSample y) const {
  if (x.is_missing() || y.is_missing()) return LogicSample::Missing;
  if (x.is_undefined() || y.is_undefined()) return LogicSample::Undefined;
  auto [lo, hi] = bounds(x.value());
  if (lo.present() && y.value() < lo.value()) return LogicSample::False;
  if (hi.present() && y.value() > hi.value()) return LogicSample::False;
  if (!lo.present() && !hi.present()) return LogicSample::Undefined;
  return LogicSample::True;
}

std::pair<NumericSample, NumericSample> envelope_bounds(const Envelope& env, double x) { return env.bounds(x); }

}  // namespace envnav::eval
