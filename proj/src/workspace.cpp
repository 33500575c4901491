#include "envnav/workspace.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "json_io.hpp"

namespace envnav::workspace {

using io::json;

Workspace Workspace::create(const fs::path& root) {
  Workspace ws(root);
  for (const auto& d : {ws.spec_dir(), ws.data_dir(), ws.results_dir(), ws.tickets_dir(), ws.templates_dir()}) {
    std::error_code ec;
    fs::create_directories(d, ec);
    if (ec) throw IoError("cannot create " + d.string() + ": " + ec.message());
  }
  return ws;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& p, const std::string& content) {
  std::error_code ec;
  fs::create_directories(p.parent_path(), ec);
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + p.string());
    out << content;
    if (!out.flush()) throw IoError("cannot write " + p.string());
  }
  fs::rename(tmp, p, ec);
  if (ec) throw IoError("cannot write " + p.string() + ": " + ec.message());
}

Timestamp now_local() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  localtime_r(&t, &tm);
  return Timestamp::from_civil(CivilTime{tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min,
                                         std::min(tm.tm_sec, 59)});
}

WorkspaceLock::WorkspaceLock(const Workspace& ws) : path_(ws.root() / ".lock") {
  int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    if (errno == EEXIST) throw IoError("workspace is locked by another run (" + path_.string() + ")");
    throw IoError("cannot create " + path_.string() + ": " + std::strerror(errno));
  }
  std::string pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] auto n = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

WorkspaceLock::~WorkspaceLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

std::string format_number(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string format_sample(const NumericSample& s) {
  if (s.present()) return format_number(s.value());
  return s.is_missing() ? "missing" : "undefined";
}

namespace {

std::optional<double> parse_number(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc{} || r.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// Splits one CSV record; double quotes group fields and "" escapes a quote.
std::vector<std::string> split_record(std::string_view line, char delim) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') out.back() += '"', ++i;
      else if (c == '"') quoted = false;
      else out.back() += c;
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(std::move(line));
  }
  return out;
}

std::optional<Timestamp> parse_time(const std::string& text, const std::string& format) {
  std::tm tm{};
  std::istringstream in(text);
  in >> std::get_time(&tm, format.c_str());
  if (in.fail()) return std::nullopt;
  in >> std::ws;
  if (!in.eof()) return std::nullopt;
  try {
    return Timestamp::from_civil(
        CivilTime{tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec});
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

std::optional<double> parse_value(std::string v, const ImportMapping& m) {
  if (m.kind == SeriesKind::Logic) {
    if (v == "true" || v == "1") return 1.0;
    if (v == "false" || v == "0") return 0.0;
    return std::nullopt;
  }
  if (m.decimal == DecimalSeparator::Comma) {
    if (v.find('.') != std::string::npos) return std::nullopt;
    std::replace(v.begin(), v.end(), ',', '.');
  }
  auto x = parse_number(v);
  if (x && !std::isfinite(*x)) return std::nullopt;
  return x;
}

json catalog_json(const std::vector<SensorMeta>& cat) {
  json arr = json::array();
  for (const auto& s : cat) {
    arr.push_back({{"id", s.id}, {"kind", std::string(to_string(s.kind))}, {"label", s.label}, {"unit", s.unit}});
  }
  return {{"sensors", std::move(arr)}};
}

fs::path raw_path(const Workspace& ws, const std::string& id) { return ws.data_dir() / (id + ".csv"); }

}  // namespace

std::vector<SensorMeta> Workspace::catalog() const {
  std::vector<SensorMeta> out;
  if (!fs::exists(catalog_path())) return out;
  try {
    auto doc = json::parse(read_file(catalog_path()));
    for (const auto& s : doc.at("sensors")) {
      auto kind = parse_kind(s.at("kind").get<std::string>());
      if (!kind) throw Error("bad sensor kind in " + catalog_path().string());
      out.push_back(SensorMeta{s.at("id").get<std::string>(), s.value("label", ""), s.value("unit", ""), *kind});
    }
  } catch (const json::exception& e) {
    throw Error("malformed " + catalog_path().string() + ": " + e.what());
  }
  return out;
}

std::vector<RawPoint> Workspace::raw_series(const std::string& sensor) const {
  std::vector<RawPoint> out;
  auto lines = lines_of(read_file(raw_path(*this, sensor)));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto f = split_record(lines[i], ',');
    auto t = f.size() == 2 ? Timestamp::parse_iso(f[0]) : std::nullopt;
    auto v = f.size() == 2 ? parse_number(f[1]) : std::nullopt;
    if (!t || !v) throw Error("corrupt data file for '" + sensor + "' at line " + std::to_string(i + 1));
    out.push_back(RawPoint{*t, *v});
  }
  return out;
}

ImportSummary import_csv(const Workspace& ws, const ImportMapping& m) {
  if (!is_identifier(m.sensor)) throw Error("invalid sensor id '" + m.sensor + "'");
  auto catalog = ws.catalog();
  auto existing = std::find_if(catalog.begin(), catalog.end(), [&](const SensorMeta& s) { return s.id == m.sensor; });
  if (existing != catalog.end() && !m.overwrite) {
    throw Error("sensor '" + m.sensor + "' already exists; pass the overwrite flag to replace it");
  }

  auto lines = lines_of(read_file(m.source));
  std::size_t header_line = 0;
  while (header_line < lines.size() && lines[header_line].empty()) ++header_line;
  if (header_line == lines.size()) throw Error(m.source.string() + ": no header line");
  auto header = split_record(lines[header_line], m.delimiter);
  auto column = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(m.source.string() + ": unknown column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t tcol = column(m.time_column), vcol = column(m.value_column);

  ImportSummary sum;
  sum.sensor = m.sensor;
  std::vector<RawPoint> points;
  std::set<Timestamp> seen;
  for (std::size_t i = header_line + 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    ++sum.rows;
    auto f = split_record(lines[i], m.delimiter);
    auto reject = [&](std::string why) { sum.rejected.push_back(RejectedRow{i + 1, std::move(why)}); };
    if (f.size() <= std::max(tcol, vcol)) {
      reject("expected " + std::to_string(header.size()) + " fields, got " + std::to_string(f.size()));
      continue;
    }
    auto t = parse_time(f[tcol], m.time_format);
    if (!t) {
      reject("unparseable timestamp '" + f[tcol] + "'");
      continue;
    }
    auto v = parse_value(f[vcol], m);
    if (!v) {
      reject("unparseable value '" + f[vcol] + "'");
      continue;
    }
    if (!seen.insert(*t).second) {
      reject("duplicate timestamp " + t->iso());
      continue;
    }
    points.push_back(RawPoint{*t, *v});
  }
  std::stable_sort(points.begin(), points.end(), [](const RawPoint& a, const RawPoint& b) { return a.time < b.time; });
  sum.imported = points.size();
  if (!points.empty()) {
    sum.first = points.front().time;
    sum.last = points.back().time;
  }
  if (sum.rows == 0) sum.warnings.push_back(m.source.string() + " has no data rows");

  std::string out = "time,value\n";
  for (const auto& p : points) out += p.time.iso() + "," + format_number(p.value) + "\n";
  Workspace::create(ws.root());
  write_file(raw_path(ws, m.sensor), out);

  SensorMeta meta{m.sensor, m.label, m.unit, m.kind};
  if (existing != catalog.end()) *existing = meta;
  else catalog.push_back(meta);
  std::sort(catalog.begin(), catalog.end(), [](const SensorMeta& a, const SensorMeta& b) { return a.id < b.id; });
  write_file(ws.catalog_path(), catalog_json(catalog).dump(2) + "\n");
  return sum;
}

RunConfig config_from_json(const std::string& text) {
  RunConfig c;
  try {
    auto j = json::parse(text);
    auto time = [&](const json& v) { return io::timestamp_from_json(v); };
    if (j.contains("step")) c.step = j.at("step").get<Seconds>();
    if (j.contains("start")) c.start = time(j.at("start"));
    if (j.contains("end")) c.end = time(j.at("end"));
    if (j.contains("run_time")) c.run_time = time(j.at("run_time"));
    if (j.contains("preprocess")) {
      const auto& p = j.at("preprocess");
      c.preprocess.max_gap = p.value("max_gap", c.preprocess.max_gap);
      c.preprocess.outlier_window = p.value("outlier_window", c.preprocess.outlier_window);
      c.preprocess.outlier_threshold = p.value("outlier_threshold", c.preprocess.outlier_threshold);
      c.toggles.outliers = p.value("outliers", c.toggles.outliers);
      c.toggles.interpolate = p.value("interpolate", c.toggles.interpolate);
    }
    if (j.contains("tickets")) {
      const auto& t = j.at("tickets");
      c.tickets.min_duration = t.value("min_duration", c.tickets.min_duration);
      c.tickets.excerpt_padding = t.value("excerpt_padding", c.tickets.excerpt_padding);
    }
    c.reports = j.value("reports", c.reports);
    if (j.contains("backend")) {
      auto b = j.at("backend").get<std::string>();
      if (b != "serial" && b != "openmp") throw Error("backend must be \"serial\" or \"openmp\"");
      c.backend = b == "serial" ? kernels::Backend::Serial : kernels::Backend::OpenMP;
    }
    c.keep_subexpressions = j.value("keep_subexpressions", c.keep_subexpressions);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed configuration: ") + e.what());
  }
  if (c.step && *c.step <= 0) throw Error("configuration: step must be positive");
  if (c.tickets.min_duration < 0) throw Error("configuration: min_duration must not be negative");
  try {
    PreprocessConfig p = c.preprocess;
    if (c.step) p.target_step = *c.step;
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw Error(std::string("configuration: ") + e.what());
  }
  return c;
}

std::string config_to_json(const RunConfig& c) {
  json j;
  if (c.step) j["step"] = *c.step;
  if (c.start) j["start"] = c.start->iso();
  if (c.end) j["end"] = c.end->iso();
  if (c.run_time) j["run_time"] = c.run_time->iso();
  j["preprocess"] = {{"max_gap", c.preprocess.max_gap},
                     {"outlier_window", c.preprocess.outlier_window},
                     {"outlier_threshold", c.preprocess.outlier_threshold},
                     {"outliers", c.toggles.outliers},
                     {"interpolate", c.toggles.interpolate}};
  j["tickets"] = {{"min_duration", c.tickets.min_duration}, {"excerpt_padding", c.tickets.excerpt_padding}};
  j["reports"] = c.reports;
  j["backend"] = c.backend == kernels::Backend::Serial ? "serial" : "openmp";
  j["keep_subexpressions"] = c.keep_subexpressions;
  return j.dump(2) + "\n";
}

RunConfig load_config(const Workspace& ws) {
  if (!fs::exists(ws.config_path())) return {};
  return config_from_json(read_file(ws.config_path()));
}

}  // namespace envnav::workspace
