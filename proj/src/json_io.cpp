#include "json_io.hpp"

#include "envnav/error.hpp"

namespace envnav::io {

json sample_json(const NumericSample& s) {
  if (s.present()) return s.value();
  return s.is_missing() ? "missing" : "undefined";
}

json sample_json(LogicSample s) { return std::string(to_string(s)); }

NumericSample numeric_from_json(const json& j) {
  if (j.is_number()) return NumericSample::of(j.get<double>());
  if (j == "missing") return NumericSample::missing();
  if (j == "undefined") return NumericSample::undefined();
  throw Error("bad numeric sample: " + j.dump());
}

LogicSample logic_from_json(const json& j) {
  if (j.is_string()) {
    if (auto v = parse_logic(j.get<std::string>())) return *v;
  }
  throw Error("bad logic sample: " + j.dump());
}

json series_json(const TimeSeries& s) {
  json values = json::array();
  if (s.kind() == SeriesKind::Numeric) {
    for (const auto& v : s.numeric()) values.push_back(sample_json(v));
  } else {
    for (auto v : s.logic()) values.push_back(sample_json(v));
  }
  return {{"start", s.grid().start.iso()},
          {"step", s.grid().step},
          {"kind", std::string(to_string(s.kind()))},
          {"values", std::move(values)}};
}

Timestamp timestamp_from_json(const json& j) {
  auto t = j.is_string() ? Timestamp::parse_iso(j.get<std::string>()) : std::nullopt;
  if (!t) throw Error("bad timestamp: " + j.dump());
  return *t;
}

TimeSeries series_from_json(const json& j) {
  const auto& values = j.at("values");
  TimeGrid g = make_grid(timestamp_from_json(j.at("start")), j.at("step").get<Seconds>(),
                         static_cast<std::int64_t>(values.size()));
  auto kind = parse_kind(j.at("kind").get<std::string>());
  if (!kind) throw Error("bad series kind: " + j.at("kind").dump());
  if (*kind == SeriesKind::Numeric) {
    std::vector<NumericSample> v;
    for (const auto& x : values) v.push_back(numeric_from_json(x));
    return TimeSeries::numeric(g, std::move(v));
  }
  std::vector<LogicSample> v;
  for (const auto& x : values) v.push_back(logic_from_json(x));
  return TimeSeries::logic(g, std::move(v));
}

}  // namespace envnav::io
