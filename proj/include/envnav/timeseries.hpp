// Quad-state equidistant time series and the preprocessing stage.
//
// A sample is either present (finite number / true / false), missing (no
// sensor data) or undefined (no evaluation possible). Every series lives on a
// TimeGrid: start + k * step for k in [0, count).

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace envnav {

using Seconds = std::int64_t;

inline constexpr Seconds kSecondsPerDay = 86400;

struct CivilTime {
  int year = 1970;
  int month = 1;  // 1-12
  int day = 1;    // 1-31
  int hour = 0;
  int minute = 0;
  int second = 0;

  friend bool operator==(const CivilTime&, const CivilTime&) = default;
};

// Timezone-naive local time, second resolution, counted from 1970-01-01.
class Timestamp {
 public:
  constexpr Timestamp() = default;

  static constexpr Timestamp from_seconds(Seconds s) { return Timestamp(s); }
  // Throws std::invalid_argument for out-of-range components (e.g. Feb 30).
  static Timestamp from_civil(const CivilTime& c);
  // Accepts "YYYY-MM-DDTHH:MM:SS" and "YYYY-MM-DD HH:MM:SS".
  static std::optional<Timestamp> parse_iso(std::string_view text);

  constexpr Seconds seconds() const { return secs_; }
  CivilTime civil() const;
  // 1 = Monday ... 7 = Sunday.
  int iso_weekday() const;
  Seconds seconds_of_day() const;
  Timestamp start_of_day() const;
  std::string iso() const;

  constexpr Timestamp operator+(Seconds d) const { return Timestamp(secs_ + d); }
  constexpr Timestamp operator-(Seconds d) const { return Timestamp(secs_ - d); }
  constexpr Seconds operator-(Timestamp o) const { return secs_ - o.secs_; }
  friend constexpr auto operator<=>(Timestamp, Timestamp) = default;

 private:
  constexpr explicit Timestamp(Seconds s) : secs_(s) {}
  Seconds secs_ = 0;
};

struct TimeGrid {
  Timestamp start;
  Seconds step = 900;
  std::size_t count = 0;

  Timestamp at(std::size_t k) const { return start + static_cast<Seconds>(k) * step; }
  // One past the last sample.
  Timestamp end() const { return at(count); }
  std::optional<std::size_t> index_of(Timestamp t) const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

// Throws std::invalid_argument on step <= 0 or count < 0.
TimeGrid make_grid(Timestamp start, Seconds step, std::int64_t count);

enum class SampleState : std::uint8_t { Present, Missing, Undefined };

class NumericSample {
 public:
  constexpr NumericSample() = default;

  // Non-finite input becomes undefined.
  static NumericSample of(double v);
  static constexpr NumericSample missing() { return NumericSample(SampleState::Missing); }
  static constexpr NumericSample undefined() { return NumericSample(SampleState::Undefined); }

  constexpr SampleState state() const { return state_; }
  constexpr bool present() const { return state_ == SampleState::Present; }
  constexpr bool is_missing() const { return state_ == SampleState::Missing; }
  constexpr bool is_undefined() const { return state_ == SampleState::Undefined; }
  // Zero unless present.
  constexpr double value() const { return value_; }

  friend constexpr bool operator==(const NumericSample&, const NumericSample&) = default;

 private:
  constexpr explicit NumericSample(SampleState s) : state_(s) {}
  double value_ = 0.0;
  SampleState state_ = SampleState::Missing;
};

enum class LogicSample : std::uint8_t { False, True, Missing, Undefined };

constexpr LogicSample to_logic(bool b) { return b ? LogicSample::True : LogicSample::False; }
constexpr bool is_known(LogicSample s) { return s == LogicSample::True || s == LogicSample::False; }

std::string_view to_string(LogicSample s);
std::optional<LogicSample> parse_logic(std::string_view text);

enum class SeriesKind : std::uint8_t { Numeric, Logic };

std::string_view to_string(SeriesKind k);
std::optional<SeriesKind> parse_kind(std::string_view text);

class TimeSeries {
 public:
  TimeSeries() = default;

  // Both throw std::invalid_argument when samples.size() != grid.count.
  static TimeSeries numeric(TimeGrid grid, std::vector<NumericSample> samples);
  static TimeSeries logic(TimeGrid grid, std::vector<LogicSample> samples);
  static TimeSeries filled(TimeGrid grid, NumericSample v);
  static TimeSeries filled(TimeGrid grid, LogicSample v);

  const TimeGrid& grid() const { return grid_; }
  std::size_t size() const { return grid_.count; }
  SeriesKind kind() const;

  // Throw std::invalid_argument on kind mismatch.
  std::span<const NumericSample> numeric() const;
  std::span<const LogicSample> logic() const;

  bool present_at(std::size_t k) const;
  bool missing_at(std::size_t k) const;

  friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

 private:
  TimeSeries(TimeGrid g, std::variant<std::vector<NumericSample>, std::vector<LogicSample>> s)
      : grid_(g), samples_(std::move(s)) {}

  TimeGrid grid_;
  std::variant<std::vector<NumericSample>, std::vector<LogicSample>> samples_;
};

// Logic samples read as 1/0 so they can be aggregated and plotted.
std::vector<NumericSample> as_numeric(const TimeSeries& s);

struct SensorMeta {
  std::string id;
  std::string label;
  std::string unit;
  SeriesKind kind = SeriesKind::Numeric;

  friend bool operator==(const SensorMeta&, const SensorMeta&) = default;
};

bool is_identifier(std::string_view s);

struct PreprocessConfig {
  Seconds target_step = 900;
  Seconds max_gap = 3600;
  std::size_t outlier_window = 5;
  double outlier_threshold = 10.0;

  // Throws std::invalid_argument unless all fields are positive and the
  // window is odd and >= 3.
  void validate() const;
};

struct RawPoint {
  Timestamp time;
  double value = 0.0;
};

// Linear interpolation between enclosing raw points that both lie within
// max_gap of the grid point; exact raw value on coincidence; otherwise missing.
// Throws std::invalid_argument if raw is unsorted or has duplicate stamps.
TimeSeries align_to_grid(std::span<const RawPoint> raw, const TimeGrid& grid, Seconds max_gap);

// Zero-order hold for logic sensors: the latest raw point at or before the
// grid point, if no older than max_gap. Raw values are read as nonzero = true.
TimeSeries align_logic_to_grid(std::span<const RawPoint> raw, const TimeGrid& grid, Seconds max_gap);

// Fills runs of missing samples enclosed by present samples whose anchors are
// at most max_gap apart. Throws std::invalid_argument on a logic series.
TimeSeries interpolate_gaps(const TimeSeries& series, Seconds max_gap);

struct OutlierResult {
  TimeSeries series;
  std::vector<bool> mask;
};

// Moving-median (Hampel-style) filter over an index-centered window. Flagged
// samples become missing.
OutlierResult detect_outliers(const TimeSeries& series, const PreprocessConfig& cfg);

double coverage(const TimeSeries& series);

}  // namespace envnav
