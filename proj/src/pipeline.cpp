#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "envnav/lang/parser.hpp"
#include "envnav/lang/validate.hpp"
#include "envnav/workspace.hpp"
#include "json_io.hpp"

namespace envnav::workspace {

using io::json;

namespace {

Seconds floor_to(Seconds s, Seconds step) { return s - ((s % step) + step) % step; }

std::vector<fs::path> files_with_extension(const fs::path& dir, const std::string& ext) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string value_text(const TimeSeries& s, std::size_t k) {
  if (s.kind() == SeriesKind::Logic) return std::string(to_string(s.logic()[k]));
  return format_sample(s.numeric()[k]);
}

NumericSample parse_numeric_cell(const std::string& v) {
  if (v == "missing") return NumericSample::missing();
  if (v == "undefined") return NumericSample::undefined();
  double x = 0.0;
  auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (v.empty() || r.ec != std::errc{} || r.ptr != v.data() + v.size()) throw Error("corrupt result value '" + v + "'");
  return NumericSample::of(x);
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(read_file(p));
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t pos = 0;
    while (true) {
      auto q = line.find(',', pos);
      f.push_back(line.substr(pos, q - pos));
      if (q == std::string::npos) break;
      pos = q + 1;
    }
    rows.push_back(std::move(f));
  }
  return rows;
}

std::string series_csv(const TimeSeries& s) {
  std::string out = "time,value\n";
  for (std::size_t k = 0; k < s.size(); ++k) out += s.grid().at(k).iso() + "," + value_text(s, k) + "\n";
  return out;
}

std::string metric_csv(const eval::MetricResult& m) {
  std::string out = "start,value,coverage,first,count\n";
  for (const auto& b : m.buckets) {
    out += b.start.iso() + "," + format_sample(b.value) + "," + format_number(b.coverage) + "," +
           std::to_string(b.first) + "," + std::to_string(b.count) + "\n";
  }
  return out;
}

json grid_json(const TimeGrid& g) { return {{"start", g.start.iso()}, {"step", g.step}, {"count", g.count}}; }

TimeGrid grid_from_json(const json& j) {
  return make_grid(io::timestamp_from_json(j.at("start")), j.at("step").get<Seconds>(),
                   j.at("count").get<std::int64_t>());
}

void write_results(const Workspace& ws, const StoredResults& r) {
  std::error_code ec;
  for (const auto& p : files_with_extension(ws.results_dir(), ".csv")) fs::remove(p, ec);
  json entries = json::array();
  for (const auto& [name, s] : r.series) {
    write_file(ws.results_dir() / (name + ".csv"), series_csv(s));
    entries.push_back({{"name", name}, {"kind", r.kinds.at(name)}, {"type", std::string(to_string(s.kind()))},
                       {"file", name + ".csv"}});
  }
  for (const auto& [name, m] : r.metrics) {
    write_file(ws.results_dir() / (name + ".csv"), metric_csv(m));
    entries.push_back({{"name", name}, {"kind", "metric"}, {"filter", std::string(lang::spelling(m.filter))},
                       {"file", name + ".csv"}});
  }
  json manifest = {{"grid", grid_json(r.grid)}, {"entries", std::move(entries)}, {"skipped", r.skipped}};
  write_file(ws.results_dir() / "manifest.json", manifest.dump(2) + "\n");
}

std::optional<lang::TimeFilter> parse_filter(std::string_view s) {
  for (auto f : {lang::TimeFilter::PerHour, lang::TimeFilter::PerDay, lang::TimeFilter::PerWeek,
                 lang::TimeFilter::PerMonth, lang::TimeFilter::PerQuarter, lang::TimeFilter::PerYear}) {
    if (lang::spelling(f) == s) return f;
  }
  return std::nullopt;
}

}  // namespace

LoadedSpec load_spec(const Workspace& ws) {
  LoadedSpec out;
  std::vector<lang::Specification> parts;
  for (const auto& p : files_with_extension(ws.spec_dir(), ".nav")) {
    auto r = lang::parse_spec(read_file(p), p.filename().string());
    out.diagnostics.insert(out.diagnostics.end(), r.diagnostics.begin(), r.diagnostics.end());
    if (r.spec) parts.push_back(std::move(*r.spec));
  }
  if (lang::has_errors(out.diagnostics)) return out;
  auto merged = lang::merge(std::move(parts));
  auto catalog = ws.catalog();
  auto diags = lang::validate_spec(merged, catalog);
  out.diagnostics.insert(out.diagnostics.end(), diags.begin(), diags.end());
  if (lang::has_errors(out.diagnostics)) return out;
  lang::Diagnostics expand_diags;
  out.spec = lang::expand_instances(merged, catalog, expand_diags);
  out.diagnostics.insert(out.diagnostics.end(), expand_diags.begin(), expand_diags.end());
  return out;
}

std::optional<TimeGrid> derive_grid(const Workspace& ws, Seconds step, const RunConfig& cfg) {
  std::optional<Timestamp> lo = cfg.start, hi = cfg.end;
  if (!lo || !hi) {
    std::optional<Timestamp> first, last;
    for (const auto& s : ws.catalog()) {
      if (!fs::exists(ws.data_dir() / (s.id + ".csv"))) continue;
      auto raw = ws.raw_series(s.id);
      if (raw.empty()) continue;
      if (!first || raw.front().time < *first) first = raw.front().time;
      if (!last || raw.back().time > *last) last = raw.back().time;
    }
    if (!first) {
      if (!lo) return std::nullopt;
      first = last = *lo;
    }
    if (!lo) lo = Timestamp::from_seconds(floor_to(first->seconds(), step));
    if (!hi) hi = Timestamp::from_seconds(floor_to(last->seconds(), step) + step);
  }
  Seconds span = std::max<Seconds>(0, *hi - *lo);
  return make_grid(*lo, step, (span + step - 1) / step);
}

eval::SensorData prepare_data(const Workspace& ws, const TimeGrid& grid, const RunConfig& cfg) {
  eval::SensorData out;
  PreprocessConfig pc = cfg.preprocess;
  pc.target_step = grid.step;
  for (const auto& s : ws.catalog()) {
    if (!fs::exists(ws.data_dir() / (s.id + ".csv"))) continue;
    auto raw = ws.raw_series(s.id);
    if (s.kind == SeriesKind::Logic) {
      out.emplace(s.id, align_logic_to_grid(raw, grid, pc.max_gap));
      continue;
    }
    auto series = align_to_grid(raw, grid, pc.max_gap);
    if (cfg.toggles.outliers) series = detect_outliers(series, pc).series;
    if (cfg.toggles.interpolate) series = interpolate_gaps(series, pc.max_gap);
    out.emplace(s.id, std::move(series));
  }
  return out;
}

RunSummary run_pipeline(const Workspace& ws, const RunConfig& cfg) {
  RunSummary sum;
  WorkspaceLock lock(ws);
  auto loaded = load_spec(ws);
  sum.diagnostics = loaded.diagnostics;
  if (!loaded.ok()) {
    sum.status = RunStatus::ValidationFailed;
    return sum;
  }
  const lang::Specification& spec = loaded.spec;
  Seconds step = cfg.step ? *cfg.step : spec.step ? *spec.step : 900;
  TimeGrid grid = derive_grid(ws, step, cfg).value_or(make_grid(Timestamp{}, step, 0));
  sum.grid = grid;
  auto data = prepare_data(ws, grid, cfg);

  eval::EvalContext ctx(spec, data, grid,
                        eval::EvalOptions{cfg.backend, cfg.keep_subexpressions, eval::MissingSensorPolicy::Skip});
  auto out = eval::evaluate_all(ctx);
  sum.artifact_count = out.artifacts.size();
  sum.skipped = out.skipped;

  Timestamp run_time = cfg.run_time ? *cfg.run_time : now_local();
  std::vector<tickets::Ticket> current;
  tickets::RuleSeries scope;
  for (const auto& a : spec.artifacts) {
    const auto* rule = std::get_if<lang::RuleDef>(&a);
    if (!rule) continue;
    const auto* vs = out.virtual_sensor(rule->name);
    if (!vs) continue;
    auto intervals = tickets::extract_violations(*vs, cfg.tickets);
    sum.violations[rule->name] = intervals.size();
    auto opened = tickets::open_tickets(intervals, *rule, ctx, cfg.tickets, run_time);
    current.insert(current.end(), opened.begin(), opened.end());
    scope.emplace(rule->name, vs->series);
    sum.fulfillment.push_back(eval::fulfillment_ratio(*vs));
  }
  std::vector<tickets::Ticket> previous;
  if (fs::exists(ws.tickets_path())) previous = tickets::tickets_from_json(read_file(ws.tickets_path()));
  auto merged = tickets::merge_tickets(previous, current, &scope);
  write_file(ws.tickets_path(), tickets::tickets_to_json(merged));
  for (const auto& t : merged) (t.status == tickets::TicketStatus::Open ? sum.open_tickets : sum.resolved_tickets)++;

  StoredResults stored;
  stored.grid = grid;
  stored.skipped = out.skipped;
  for (const auto& [id, s] : data) {
    stored.series.emplace(id, s);
    stored.kinds.emplace(id, "sensor");
  }
  for (const auto& [name, r] : out.artifacts) {
    if (const auto* m = std::get_if<eval::MetricResult>(&r)) {
      stored.metrics.emplace(name, *m);
      stored.kinds.emplace(name, "metric");
    } else {
      stored.series.emplace(name, std::get<eval::VirtualSensor>(r).series);
      stored.kinds.emplace(name, std::string(lang::spelling(lang::kind_of(*spec.find(name)))));
    }
  }
  for (const auto& [name, vs] : out.subexpressions) {
    stored.series.emplace(name, vs.series);
    stored.kinds.emplace(name, "subexpression");
  }
  write_results(ws, stored);
  sum.reports = render_reports(ws, stored, spec, cfg.reports, run_time);
  sum.status = sum.skipped.empty() ? RunStatus::Ok : RunStatus::Partial;
  return sum;
}

std::vector<std::string> StoredResults::names() const {
  std::vector<std::string> out;
  for (const auto& [n, _] : series) out.push_back(n);
  for (const auto& [n, _] : metrics) out.push_back(n);
  std::sort(out.begin(), out.end());
  return out;
}

eval::EvalOutput StoredResults::as_eval_output() const {
  eval::EvalOutput out;
  for (const auto& [name, s] : series) {
    const auto& kind = kinds.at(name);
    if (kind == "sensor") continue;
    eval::VirtualSensor vs{name, s};
    if (kind == "subexpression") out.subexpressions.emplace(name, std::move(vs));
    else out.artifacts.emplace(name, std::move(vs));
  }
  for (const auto& [name, m] : metrics) out.artifacts.emplace(name, m);
  out.skipped = skipped;
  return out;
}

eval::SensorData StoredResults::sensors() const {
  eval::SensorData out;
  for (const auto& [name, s] : series) {
    if (kinds.at(name) == "sensor") out.emplace(name, s);
  }
  return out;
}

StoredResults load_results(const Workspace& ws) {
  fs::path manifest_path = ws.results_dir() / "manifest.json";
  if (!fs::exists(manifest_path)) throw IoError("no stored results in " + ws.results_dir().string() + "; run eval first");
  StoredResults r;
  try {
    auto manifest = json::parse(read_file(manifest_path));
    r.grid = grid_from_json(manifest.at("grid"));
    r.skipped = manifest.at("skipped").get<std::map<std::string, std::string>>();
    for (const auto& e : manifest.at("entries")) {
      auto name = e.at("name").get<std::string>();
      auto kind = e.at("kind").get<std::string>();
      auto rows = read_csv(ws.results_dir() / e.at("file").get<std::string>());
      if (kind == "metric") {
        auto filter = parse_filter(e.at("filter").get<std::string>());
        if (!filter) throw Error("bad metric filter for '" + name + "'");
        eval::MetricResult m{name, *filter, r.grid, {}};
        for (const auto& f : rows) {
          if (f.size() != 5) throw Error("corrupt metric file for '" + name + "'");
          auto start = Timestamp::parse_iso(f[0]);
          if (!start) throw Error("corrupt metric file for '" + name + "'");
          m.buckets.push_back(eval::MetricBucket{*start, parse_numeric_cell(f[1]), parse_numeric_cell(f[2]).value(),
                                                 std::stoul(f[3]), std::stoul(f[4])});
        }
        r.metrics.emplace(name, std::move(m));
        r.kinds.emplace(name, kind);
        continue;
      }
      if (rows.size() != r.grid.count) throw Error("result '" + name + "' does not match the stored grid");
      auto type = parse_kind(e.at("type").get<std::string>());
      if (!type) throw Error("bad series type for '" + name + "'");
      if (*type == SeriesKind::Logic) {
        std::vector<LogicSample> v;
        for (const auto& f : rows) {
          auto x = f.size() == 2 ? parse_logic(f[1]) : std::nullopt;
          if (!x) throw Error("corrupt result file for '" + name + "'");
          v.push_back(*x);
        }
        r.series.emplace(name, TimeSeries::logic(r.grid, std::move(v)));
      } else {
        std::vector<NumericSample> v;
        for (const auto& f : rows) {
          if (f.size() != 2) throw Error("corrupt result file for '" + name + "'");
          v.push_back(parse_numeric_cell(f[1]));
        }
        r.series.emplace(name, TimeSeries::numeric(r.grid, std::move(v)));
      }
      r.kinds.emplace(name, kind);
    }
  } catch (const json::exception& e) {
    throw Error(std::string("malformed results manifest: ") + e.what());
  }
  return r;
}

std::vector<std::string> render_reports(const Workspace& ws, const StoredResults& results,
                                        const lang::Specification& spec, const std::vector<std::string>& selection,
                                        Timestamp generated_at) {
  std::map<std::string, report::ReportTemplate> templates;
  for (const auto& p : files_with_extension(ws.templates_dir(), ".json")) {
    auto t = report::template_from_json(read_file(p));
    if (!templates.emplace(t.id, t).second) throw Error("duplicate report template id '" + t.id + "'");
  }
  for (const auto& id : selection) {
    if (!templates.count(id)) throw Error("unknown report template '" + id + "'");
  }
  report::CommentStore comments;
  if (fs::exists(ws.comments_path())) comments = report::CommentStore::from_json(read_file(ws.comments_path()));
  std::vector<tickets::Ticket> ticket_list;
  if (fs::exists(ws.tickets_path())) ticket_list = tickets::tickets_from_json(read_file(ws.tickets_path()));

  auto output = results.as_eval_output();
  auto sensors = results.sensors();
  report::ReportInputs inputs{&output, &sensors, &spec, &ticket_list, results.grid};
  std::vector<std::string> written;
  for (const auto& [id, t] : templates) {
    if (!selection.empty() && std::find(selection.begin(), selection.end(), id) == selection.end()) continue;
    auto doc = report::render_report(t, inputs, comments, generated_at);
    write_file(ws.reports_dir() / (id + ".html"), doc.html());
    write_file(ws.reports_dir() / (id + ".json"), doc.json());
    written.push_back(id);
  }
  return written;
}

std::string export_results(const StoredResults& results, const std::vector<std::string>& selection,
                           ExportFormat format) {
  auto available = results.names();
  auto list = [&] {
    std::string s;
    for (const auto& n : available) s += (s.empty() ? "" : ", ") + n;
    return s.empty() ? std::string("(none)") : s;
  };
  if (selection.empty()) throw Error("empty export selection; available: " + list());
  std::vector<TimeSeries> columns;
  for (const auto& name : selection) {
    if (auto it = results.series.find(name); it != results.series.end()) {
      columns.push_back(it->second);
    } else if (auto m = results.metrics.find(name); m != results.metrics.end()) {
      columns.push_back(eval::expand_metric(m->second));
    } else {
      throw Error("unknown result '" + name + "'; available: " + list());
    }
  }
  const TimeGrid& g = results.grid;
  if (format == ExportFormat::Tabular) {
    std::string out = "time";
    for (const auto& n : selection) out += "," + n;
    out += "\n";
    for (std::size_t k = 0; k < g.count; ++k) {
      out += g.at(k).iso();
      for (const auto& c : columns) out += "," + value_text(c, k);
      out += "\n";
    }
    return out;
  }
  json series = json::array();
  for (std::size_t i = 0; i < selection.size(); ++i) {
    const auto& name = selection[i];
    json entry = {{"name", name}, {"kind", results.kinds.at(name)}};
    json values = io::series_json(columns[i]).at("values");
    entry["type"] = std::string(to_string(columns[i].kind()));
    entry["values"] = std::move(values);
    if (auto m = results.metrics.find(name); m != results.metrics.end()) {
      json buckets = json::array();
      for (const auto& b : m->second.buckets) {
        buckets.push_back({{"start", b.start.iso()}, {"value", io::sample_json(b.value)}, {"coverage", b.coverage}});
      }
      entry["filter"] = std::string(lang::spelling(m->second.filter));
      entry["buckets"] = std::move(buckets);
    }
    series.push_back(std::move(entry));
  }
  json timestamps = json::array();
  for (std::size_t k = 0; k < g.count; ++k) timestamps.push_back(g.at(k).iso());
  return json{{"grid", grid_json(g)}, {"timestamps", std::move(timestamps)}, {"series", std::move(series)}}.dump(2) + "\n";
}

}  // namespace envnav::workspace
