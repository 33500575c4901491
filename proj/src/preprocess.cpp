#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "envnav/timeseries.hpp"

namespace envnav {

namespace {

void require_sorted(std::span<const RawPoint> raw) {
  for (std::size_t i = 1; i < raw.size(); ++i) {
    if (!(raw[i - 1].time < raw[i].time)) {
      throw std::invalid_argument("raw points must be strictly increasing in time (offending stamp " +
                                  raw[i].time.iso() + ")");
    }
  }
}

// First raw point with time >= t.
std::size_t lower_index(std::span<const RawPoint> raw, Timestamp t) {
  auto it = std::lower_bound(raw.begin(), raw.end(), t,
                             [](const RawPoint& p, Timestamp v) { return p.time < v; });
  return static_cast<std::size_t>(it - raw.begin());
}

double median_of(std::vector<double>& v) {
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  double hi = *mid;
  if (v.size() % 2 == 1) return hi;
  double lo = *std::max_element(v.begin(), mid);
  return (lo + hi) / 2.0;
}

}  // namespace

TimeSeries align_to_grid(std::span<const RawPoint> raw, const TimeGrid& grid, Seconds max_gap) {
  require_sorted(raw);
  std::vector<NumericSample> out(grid.count, NumericSample::missing());
  for (std::size_t k = 0; k < grid.count; ++k) {
    Timestamp t = grid.at(k);
    std::size_t r = lower_index(raw, t);
    if (r < raw.size() && raw[r].time == t) {
      out[k] = NumericSample::of(raw[r].value);
      continue;
    }
    if (r == 0 || r == raw.size()) continue;
    const RawPoint& left = raw[r - 1];
    const RawPoint& right = raw[r];
    if (t - left.time > max_gap || right.time - t > max_gap) continue;
    double frac = static_cast<double>(t - left.time) / static_cast<double>(right.time - left.time);
    out[k] = NumericSample::of(left.value + frac * (right.value - left.value));
  }
  return TimeSeries::numeric(grid, std::move(out));
}

TimeSeries align_logic_to_grid(std::span<const RawPoint> raw, const TimeGrid& grid, Seconds max_gap) {
  require_sorted(raw);
  std::vector<LogicSample> out(grid.count, LogicSample::Missing);
  for (std::size_t k = 0; k < grid.count; ++k) {
    Timestamp t = grid.at(k);
    std::size_t r = lower_index(raw, t);
    if (r < raw.size() && raw[r].time == t) {
      out[k] = to_logic(raw[r].value != 0.0);
    } else if (r > 0 && t - raw[r - 1].time <= max_gap) {
      out[k] = to_logic(raw[r - 1].value != 0.0);
    }
  }
  return TimeSeries::logic(grid, std::move(out));
}

TimeSeries interpolate_gaps(const TimeSeries& series, Seconds max_gap) {
  auto in = series.numeric();
  std::vector<NumericSample> out(in.begin(), in.end());
  const TimeGrid& g = series.grid();
  std::size_t n = out.size();
  std::size_t k = 0;
  while (k < n) {
    if (!out[k].is_missing()) {
      ++k;
      continue;
    }
    std::size_t run_end = k;
    while (run_end < n && out[run_end].is_missing()) ++run_end;
    bool anchored = k > 0 && run_end < n && out[k - 1].present() && out[run_end].present();
    if (anchored) {
      std::size_t left = k - 1;
      Seconds span = static_cast<Seconds>(run_end - left) * g.step;
      if (span <= max_gap) {
        double a = out[left].value();
        double b = out[run_end].value();
        double width = static_cast<double>(run_end - left);
        for (std::size_t j = k; j < run_end; ++j) {
          out[j] = NumericSample::of(a + (b - a) * static_cast<double>(j - left) / width);
        }
      }
    }
    k = run_end;
  }
  return TimeSeries::numeric(g, std::move(out));
}

OutlierResult detect_outliers(const TimeSeries& series, const PreprocessConfig& cfg) {
  cfg.validate();
  auto in = series.numeric();
  std::size_t n = in.size();
  std::size_t half = cfg.outlier_window / 2;
  std::vector<NumericSample> out(in.begin(), in.end());
  std::vector<bool> mask(n, false);
  std::vector<double> window;
  window.reserve(cfg.outlier_window);
  for (std::size_t k = 0; k < n; ++k) {
    if (!in[k].present()) continue;
    window.clear();
    std::size_t lo = k >= half ? k - half : 0;
    std::size_t hi = std::min(n - 1, k + half);
    for (std::size_t j = lo; j <= hi; ++j) {
      if (in[j].present()) window.push_back(in[j].value());
    }
    if (window.size() < 3) continue;
    double med = median_of(window);
    if (std::abs(in[k].value() - med) > cfg.outlier_threshold) {
      mask[k] = true;
      out[k] = NumericSample::missing();
    }
  }
  return {TimeSeries::numeric(series.grid(), std::move(out)), std::move(mask)};
}

}  // namespace envnav
