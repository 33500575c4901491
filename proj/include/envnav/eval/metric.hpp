#pragma once

#include <span>
#include <string>
#include <vector>

#include "envnav/lang/ast.hpp"
#include "envnav/timeseries.hpp"

namespace envnav::eval {

struct MetricBucket {
  Timestamp start;
  NumericSample value;
  double coverage = 0.0;   // present samples / grid samples in the bucket
  std::size_t first = 0;   // grid index of the first sample
  std::size_t count = 0;   // grid samples in the bucket

  friend bool operator==(const MetricBucket&, const MetricBucket&) = default;
};

struct MetricResult {
  std::string name;
  lang::TimeFilter filter = lang::TimeFilter::PerHour;
  TimeGrid grid;
  std::vector<MetricBucket> buckets;

  friend bool operator==(const MetricResult&, const MetricResult&) = default;
};

// Calendar-aligned start of the bucket holding t (Monday-start weeks).
Timestamp bucket_start(Timestamp t, lang::TimeFilter filter);

// Aggregate over present values only; no present value gives missing.
NumericSample aggregate(lang::MetricBase base, std::span<const double> params, std::vector<double> values);

// Buckets a numeric series; logic input reads true as 1 and false as 0.
MetricResult compute_metric(std::string name, const TimeSeries& context, lang::MetricBase base,
                            std::span<const double> params, lang::TimeFilter filter);

// Step series on the metric's grid: every sample carries its bucket's value.
TimeSeries expand_metric(const MetricResult& m);

}  // namespace envnav::eval
