// JSON encoding of samples and series shared by tickets, reports and results.

#pragma once

#include <json.hpp>

#include "envnav/timeseries.hpp"

namespace envnav::io {

using nlohmann::json;

json sample_json(const NumericSample& s);
json sample_json(LogicSample s);
NumericSample numeric_from_json(const json& j);
LogicSample logic_from_json(const json& j);

json series_json(const TimeSeries& s);
TimeSeries series_from_json(const json& j);

Timestamp timestamp_from_json(const json& j);

}  // namespace envnav::io
