#include "envnav/eval/metric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace envnav::eval {

using lang::MetricBase;
using lang::TimeFilter;

Timestamp bucket_start(Timestamp t, TimeFilter filter) {
  Timestamp day = t.start_of_day();
  switch (filter) {
    case TimeFilter::PerHour: return day + (t.seconds_of_day() / 3600) * 3600;
    case TimeFilter::PerDay: return day;
    case TimeFilter::PerWeek: return day - static_cast<Seconds>(t.iso_weekday() - 1) * kSecondsPerDay;
    default: break;
  }
  CivilTime c = t.civil();
  c.day = 1;
  c.hour = c.minute = c.second = 0;
  if (filter == TimeFilter::PerQuarter) c.month = (c.month - 1) / 3 * 3 + 1;
  if (filter == TimeFilter::PerYear) c.month = 1;
  return Timestamp::from_civil(c);
}

NumericSample aggregate(MetricBase base, std::span<const double> params, std::vector<double> values) {
  if (params.size() != lang::parameter_count(base)) {
    throw std::invalid_argument(std::string(lang::spelling(base)) + " expects " +
                                std::to_string(lang::parameter_count(base)) + " parameter(s)");
  }
  if (base == MetricBase::Quantile && !(params[0] >= 0.0 && params[0] <= 1.0)) {
    throw std::invalid_argument("QUANTILE parameter must lie in [0, 1]");
  }
  if (values.empty()) return NumericSample::missing();
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  switch (base) {
    case MetricBase::Sum: return NumericSample::of(sum);
    case MetricBase::Average: return NumericSample::of(sum / n);
    case MetricBase::Maximum: return NumericSample::of(*std::max_element(values.begin(), values.end()));
    case MetricBase::Minimum: return NumericSample::of(*std::min_element(values.begin(), values.end()));
    case MetricBase::StdDev: {
      double mean = sum / n, sq = 0.0;
      for (double v : values) sq += (v - mean) * (v - mean);
      return NumericSample::of(std::sqrt(sq / n));
    }
    case MetricBase::Quantile: {
      double p = params[0];
      std::sort(values.begin(), values.end());
      double h = (n - 1.0) * p;
      auto lo = static_cast<std::size_t>(std::floor(h));
      auto hi = std::min(lo + 1, values.size() - 1);
      return NumericSample::of(values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]));
    }
  }
  return NumericSample::undefined();
}

MetricResult compute_metric(std::string name, const TimeSeries& context, MetricBase base,
                            std::span<const double> params, TimeFilter filter) {
  MetricResult out{std::move(name), filter, context.grid(), {}};
  const auto samples = as_numeric(context);
  const TimeGrid& g = context.grid();
  std::vector<double> present;
  std::size_t k = 0;
  while (k < g.count) {
    Timestamp start = bucket_start(g.at(k), filter);
    std::size_t first = k;
    present.clear();
    for (; k < g.count && bucket_start(g.at(k), filter) == start; ++k) {
      if (samples[k].present()) present.push_back(samples[k].value());
    }
    std::size_t count = k - first;
    double cov = static_cast<double>(present.size()) / static_cast<double>(count);
    out.buckets.push_back(MetricBucket{start, aggregate(base, params, present), cov, first, count});
  }
  return out;
}

TimeSeries expand_metric(const MetricResult& m) {
  std::vector<NumericSample> out(m.grid.count, NumericSample::missing());
  for (const auto& b : m.buckets) std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(b.first), b.count, b.value);
  return TimeSeries::numeric(m.grid, std::move(out));
}

}  // namespace envnav::eval
