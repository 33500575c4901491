#include "envnav/timeseries.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace envnav {

namespace chr = std::chrono;

namespace {

Seconds floor_div(Seconds a, Seconds b) {
  Seconds q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool parse_fixed(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    char c = s[i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

}  // namespace

Timestamp Timestamp::from_civil(const CivilTime& c) {
  chr::year_month_day ymd{chr::year{c.year}, chr::month{static_cast<unsigned>(c.month)},
                          chr::day{static_cast<unsigned>(c.day)}};
  if (c.month < 1 || c.month > 12 || c.day < 1 || !ymd.ok()) {
    throw std::invalid_argument("invalid calendar date");
  }
  if (c.hour < 0 || c.hour > 23 || c.minute < 0 || c.minute > 59 || c.second < 0 || c.second > 59) {
    throw std::invalid_argument("invalid time of day");
  }
  Seconds days = chr::sys_days{ymd}.time_since_epoch().count();
  return Timestamp(days * kSecondsPerDay + c.hour * 3600 + c.minute * 60 + c.second);
}

std::optional<Timestamp> Timestamp::parse_iso(std::string_view s) {
  if (s.size() != 19 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' ||
      s[16] != ':') {
    return std::nullopt;
  }
  CivilTime c;
  if (!parse_fixed(s, 0, 4, c.year) || !parse_fixed(s, 5, 2, c.month) || !parse_fixed(s, 8, 2, c.day) ||
      !parse_fixed(s, 11, 2, c.hour) || !parse_fixed(s, 14, 2, c.minute) || !parse_fixed(s, 17, 2, c.second)) {
    return std::nullopt;
  }
  try {
    return from_civil(c);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

CivilTime Timestamp::civil() const {
  Seconds days = floor_div(secs_, kSecondsPerDay);
  Seconds rem = secs_ - days * kSecondsPerDay;
  chr::year_month_day ymd{chr::sys_days{chr::days{days}}};
  CivilTime c;
  c.year = static_cast<int>(ymd.year());
  c.month = static_cast<int>(static_cast<unsigned>(ymd.month()));
  c.day = static_cast<int>(static_cast<unsigned>(ymd.day()));
  c.hour = static_cast<int>(rem / 3600);
  c.minute = static_cast<int>((rem % 3600) / 60);
  c.second = static_cast<int>(rem % 60);
  return c;
}

int Timestamp::iso_weekday() const {
  chr::weekday wd{chr::sys_days{chr::days{floor_div(secs_, kSecondsPerDay)}}};
  return static_cast<int>(wd.iso_encoding());
}

Seconds Timestamp::seconds_of_day() const { return secs_ - floor_div(secs_, kSecondsPerDay) * kSecondsPerDay; }

Timestamp Timestamp::start_of_day() const { return Timestamp(secs_ - seconds_of_day()); }

std::string Timestamp::iso() const {
  CivilTime c = civil();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d", c.year, c.month, c.day, c.hour, c.minute,
                c.second);
  return buf;
}

std::optional<std::size_t> TimeGrid::index_of(Timestamp t) const {
  Seconds d = t - start;
  if (d < 0 || d % step != 0) return std::nullopt;
  auto k = static_cast<std::size_t>(d / step);
  if (k >= count) return std::nullopt;
  return k;
}

TimeGrid make_grid(Timestamp start, Seconds step, std::int64_t count) {
  if (step <= 0) throw std::invalid_argument("grid step must be positive");
  if (count < 0) throw std::invalid_argument("grid count must be non-negative");
  return TimeGrid{start, step, static_cast<std::size_t>(count)};
}

NumericSample NumericSample::of(double v) {
  if (!std::isfinite(v)) return undefined();
  NumericSample s(SampleState::Present);
  s.value_ = v;
  return s;
}

std::string_view to_string(LogicSample s) {
  switch (s) {
    case LogicSample::False: return "false";
    case LogicSample::True: return "true";
    case LogicSample::Missing: return "missing";
    case LogicSample::Undefined: return "undefined";
  }
  return "undefined";
}

std::optional<LogicSample> parse_logic(std::string_view t) {
  if (t == "true") return LogicSample::True;
  if (t == "false") return LogicSample::False;
  if (t == "missing") return LogicSample::Missing;
  if (t == "undefined") return LogicSample::Undefined;
  return std::nullopt;
}

std::string_view to_string(SeriesKind k) { return k == SeriesKind::Numeric ? "numeric" : "logic"; }

std::optional<SeriesKind> parse_kind(std::string_view t) {
  if (t == "numeric") return SeriesKind::Numeric;
  if (t == "logic") return SeriesKind::Logic;
  return std::nullopt;
}

TimeSeries TimeSeries::numeric(TimeGrid grid, std::vector<NumericSample> samples) {
  if (samples.size() != grid.count) throw std::invalid_argument("sample count does not match grid");
  return TimeSeries(grid, std::move(samples));
}

TimeSeries TimeSeries::logic(TimeGrid grid, std::vector<LogicSample> samples) {
  if (samples.size() != grid.count) throw std::invalid_argument("sample count does not match grid");
  return TimeSeries(grid, std::move(samples));
}

TimeSeries TimeSeries::filled(TimeGrid grid, NumericSample v) {
  return TimeSeries(grid, std::vector<NumericSample>(grid.count, v));
}

TimeSeries TimeSeries::filled(TimeGrid grid, LogicSample v) {
  return TimeSeries(grid, std::vector<LogicSample>(grid.count, v));
}

SeriesKind TimeSeries::kind() const {
  return std::holds_alternative<std::vector<NumericSample>>(samples_) ? SeriesKind::Numeric : SeriesKind::Logic;
}

std::span<const NumericSample> TimeSeries::numeric() const {
  if (auto* v = std::get_if<std::vector<NumericSample>>(&samples_)) return *v;
  throw std::invalid_argument("series is not numeric");
}

std::span<const LogicSample> TimeSeries::logic() const {
  if (auto* v = std::get_if<std::vector<LogicSample>>(&samples_)) return *v;
  throw std::invalid_argument("series is not logic");
}

bool TimeSeries::present_at(std::size_t k) const {
  if (kind() == SeriesKind::Numeric) return numeric()[k].present();
  return is_known(logic()[k]);
}

bool TimeSeries::missing_at(std::size_t k) const {
  if (kind() == SeriesKind::Numeric) return numeric()[k].is_missing();
  return logic()[k] == LogicSample::Missing;
}

std::vector<NumericSample> as_numeric(const TimeSeries& s) {
  if (s.kind() == SeriesKind::Numeric) {
    auto n = s.numeric();
    return {n.begin(), n.end()};
  }
  std::vector<NumericSample> out;
  out.reserve(s.size());
  for (LogicSample l : s.logic()) {
    switch (l) {
      case LogicSample::True: out.push_back(NumericSample::of(1.0)); break;
      case LogicSample::False: out.push_back(NumericSample::of(0.0)); break;
      case LogicSample::Missing: out.push_back(NumericSample::missing()); break;
      case LogicSample::Undefined: out.push_back(NumericSample::undefined()); break;
    }
  }
  return out;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  if (!alpha(s[0])) return false;
  for (char c : s.substr(1)) {
    if (!alpha(c) && !(c >= '0' && c <= '9') && c != '.') return false;
  }
  return true;
}

void PreprocessConfig::validate() const {
  if (target_step <= 0) throw std::invalid_argument("target_step must be positive");
  if (max_gap <= 0) throw std::invalid_argument("max_gap must be positive");
  if (outlier_window < 3 || outlier_window % 2 == 0) {
    throw std::invalid_argument("outlier_window must be odd and at least 3");
  }
  if (!(outlier_threshold > 0.0)) throw std::invalid_argument("outlier_threshold must be positive");
}

double coverage(const TimeSeries& series) {
  if (series.size() == 0) return 1.0;
  std::size_t present = 0;
  for (std::size_t k = 0; k < series.size(); ++k) present += series.present_at(k) ? 1 : 0;
  return static_cast<double>(present) / static_cast<double>(series.size());
}

}  // namespace envnav
