#include "envnav/report.hpp"

#include <set>

#include "json_io.hpp"

namespace envnav::report {

using io::json;

std::string_view to_string(PlotKind k) {
  switch (k) {
    case PlotKind::Line: return "line";
    case PlotKind::Scatter: return "scatter";
    case PlotKind::Carpet: return "carpet";
  }
  return "?";
}

std::optional<PlotKind> parse_plot_kind(std::string_view s) {
  if (s == "line") return PlotKind::Line;
  if (s == "scatter") return PlotKind::Scatter;
  if (s == "carpet") return PlotKind::Carpet;
  return std::nullopt;
}

std::string_view to_string(SectionKind k) {
  switch (k) {
    case SectionKind::Plot: return "plot";
    case SectionKind::MetricTable: return "metric_table";
    case SectionKind::TicketSummary: return "ticket_summary";
    case SectionKind::FulfillmentTable: return "fulfillment_table";
    case SectionKind::Text: return "text";
  }
  return "?";
}

namespace {

std::optional<SectionKind> parse_section_kind(std::string_view s) {
  for (auto k : {SectionKind::Plot, SectionKind::MetricTable, SectionKind::TicketSummary,
                 SectionKind::FulfillmentTable, SectionKind::Text}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

}  // namespace

PlotData build_plot_data(PlotKind kind, std::span<const eval::VirtualSensor> inputs) {
  const std::size_t need = kind == PlotKind::Scatter ? 2 : 1;
  if (inputs.size() != need) {
    throw std::invalid_argument(std::string(to_string(kind)) + " plot needs " + std::to_string(need) + " series");
  }
  PlotData out;
  out.kind = kind;
  for (const auto& vs : inputs) out.series.push_back(vs.name);
  const TimeGrid& g = inputs[0].series.grid();
  auto values = as_numeric(inputs[0].series);

  switch (kind) {
    case PlotKind::Line:
      for (std::size_t k = 0; k < g.count; ++k) out.line.push_back(LinePoint{g.at(k), values[k]});
      break;
    case PlotKind::Scatter: {
      if (inputs[1].series.grid() != g) throw std::invalid_argument("scatter inputs are on different grids");
      auto ys = as_numeric(inputs[1].series);
      for (std::size_t k = 0; k < g.count; ++k) {
        if (values[k].present() && ys[k].present()) out.scatter.push_back(ScatterPoint{g.at(k), values[k].value(), ys[k].value()});
      }
      break;
    }
    case PlotKind::Carpet: {
      if (kSecondsPerDay % g.step != 0) throw std::invalid_argument("carpet plot needs a step that divides one day");
      out.carpet.columns = static_cast<std::size_t>(kSecondsPerDay / g.step);
      if (g.count == 0) break;
      Timestamp first = g.start.start_of_day();
      auto rows = static_cast<std::size_t>((g.at(g.count - 1).start_of_day() - first) / kSecondsPerDay + 1);
      for (std::size_t r = 0; r < rows; ++r) {
        out.carpet.days.push_back(first + static_cast<Seconds>(r) * kSecondsPerDay);
        out.carpet.cells.emplace_back(out.carpet.columns, NumericSample::missing());
      }
      for (std::size_t k = 0; k < g.count; ++k) {
        Timestamp t = g.at(k);
        auto r = static_cast<std::size_t>((t.start_of_day() - first) / kSecondsPerDay);
        auto c = static_cast<std::size_t>(t.seconds_of_day() / g.step);
        out.carpet.cells[r][c] = values[k];
      }
      break;
    }
  }
  return out;
}

ReportTemplate template_from_json(const std::string& text) {
  ReportTemplate t;
  try {
    auto j = json::parse(text);
    t.id = j.at("id").get<std::string>();
    t.title = j.value("title", t.id);
    std::set<std::string> ids;
    for (const auto& s : j.at("sections")) {
      Section sec;
      sec.id = s.at("id").get<std::string>();
      if (!ids.insert(sec.id).second) throw Error("duplicate section id '" + sec.id + "'");
      sec.title = s.value("title", sec.id);
      auto kind = parse_section_kind(s.at("kind").get<std::string>());
      if (!kind) throw Error("section '" + sec.id + "': unknown kind " + s.at("kind").dump());
      sec.kind = *kind;
      if (s.contains("plot")) {
        auto p = parse_plot_kind(s.at("plot").get<std::string>());
        if (!p) throw Error("section '" + sec.id + "': unknown plot kind " + s.at("plot").dump());
        sec.plot = *p;
      }
      sec.names = s.value("names", std::vector<std::string>{});
      sec.filter = s.value("filter", "");
      sec.text = s.value("text", "");
      t.sections.push_back(std::move(sec));
    }
  } catch (const json::exception& e) {
    throw Error(std::string("malformed report template: ") + e.what());
  }
  return t;
}

std::string template_to_json(const ReportTemplate& t) {
  json sections = json::array();
  for (const auto& s : t.sections) {
    json j = {{"id", s.id}, {"title", s.title}, {"kind", std::string(to_string(s.kind))}};
    if (s.kind == SectionKind::Plot) j["plot"] = std::string(to_string(s.plot));
    if (!s.names.empty()) j["names"] = s.names;
    if (!s.filter.empty()) j["filter"] = s.filter;
    if (!s.text.empty()) j["text"] = s.text;
    sections.push_back(std::move(j));
  }
  return json{{"id", t.id}, {"title", t.title}, {"sections", std::move(sections)}}.dump(2) + "\n";
}

const std::vector<Comment>& CommentStore::comments(const std::string& section) const {
  static const std::vector<Comment> none;
  auto it = by_section_.find(section);
  return it == by_section_.end() ? none : it->second;
}

namespace {

json comment_json(const Comment& c) { return {{"author", c.author}, {"time", c.time.iso()}, {"text", c.text}}; }

}  // namespace

std::string CommentStore::to_json() const {
  json j = json::object();
  for (const auto& [id, list] : by_section_) {
    json arr = json::array();
    for (const auto& c : list) arr.push_back(comment_json(c));
    j[id] = std::move(arr);
  }
  return j.dump(2) + "\n";
}

CommentStore CommentStore::from_json(const std::string& text) {
  CommentStore store;
  try {
    auto doc = json::parse(text);
    for (const auto& [id, list] : doc.items()) {
      for (const auto& c : list) {
        store.add(id, Comment{c.at("author").get<std::string>(), io::timestamp_from_json(c.at("time")),
                              c.at("text").get<std::string>()});
      }
    }
  } catch (const json::exception& e) {
    throw Error(std::string("malformed comment store: ") + e.what());
  }
  return store;
}

CommentStore attach_comment(CommentStore store, const std::string& section, const std::string& author,
                            const std::string& text, Timestamp time) {
  store.add(section, Comment{author, time, text});
  return store;
}

namespace {

std::optional<eval::VirtualSensor> lookup_series(const ReportInputs& in, const std::string& name) {
  if (in.results) {
    if (const auto* vs = in.results->virtual_sensor(name)) return *vs;
    if (const auto* m = in.results->metric(name)) return eval::VirtualSensor{name, eval::expand_metric(*m)};
  }
  if (in.sensors) {
    if (auto it = in.sensors->find(name); it != in.sensors->end()) return eval::VirtualSensor{name, it->second};
  }
  return std::nullopt;
}

json plot_json(const PlotData& p) {
  json j = {{"plot", std::string(to_string(p.kind))}, {"series", p.series}};
  json points = json::array();
  switch (p.kind) {
    case PlotKind::Line:
      for (const auto& pt : p.line) points.push_back({pt.time.iso(), io::sample_json(pt.value)});
      j["points"] = std::move(points);
      break;
    case PlotKind::Scatter:
      for (const auto& pt : p.scatter) points.push_back({pt.time.iso(), pt.x, pt.y});
      j["points"] = std::move(points);
      break;
    case PlotKind::Carpet: {
      json days = json::array(), cells = json::array();
      for (const auto& d : p.carpet.days) days.push_back(d.iso().substr(0, 10));
      for (const auto& row : p.carpet.cells) {
        json r = json::array();
        for (const auto& v : row) r.push_back(io::sample_json(v));
        cells.push_back(std::move(r));
      }
      j["days"] = std::move(days);
      j["columns"] = p.carpet.columns;
      j["cells"] = std::move(cells);
      break;
    }
  }
  return j;
}

json ratio_json(const std::optional<double>& r) { return r ? json(*r) : json("missing"); }

json section_content(const Section& s, const ReportInputs& in) {
  switch (s.kind) {
    case SectionKind::Plot: {
      std::vector<eval::VirtualSensor> series;
      for (const auto& n : s.names) {
        auto vs = lookup_series(in, n);
        if (!vs) throw RenderError(s.id, "unknown series '" + n + "'");
        series.push_back(std::move(*vs));
      }
      try {
        return plot_json(build_plot_data(s.plot, series));
      } catch (const std::invalid_argument& e) {
        throw RenderError(s.id, e.what());
      }
    }
    case SectionKind::MetricTable: {
      json metrics = json::array();
      for (const auto& n : s.names) {
        const auto* m = in.results ? in.results->metric(n) : nullptr;
        if (!m) throw RenderError(s.id, "unknown metric '" + n + "'");
        json rows = json::array();
        for (const auto& b : m->buckets) {
          rows.push_back({{"start", b.start.iso()}, {"value", io::sample_json(b.value)}, {"coverage", b.coverage}});
        }
        metrics.push_back({{"name", n}, {"filter", std::string(lang::spelling(m->filter))}, {"rows", rows}});
      }
      return {{"metrics", std::move(metrics)}};
    }
    case SectionKind::TicketSummary: {
      std::set<std::string> rules(s.names.begin(), s.names.end());
      json list = json::array();
      std::size_t open = 0, resolved = 0;
      if (in.tickets) {
        for (const auto& t : *in.tickets) {
          if (!rules.empty() && !rules.count(t.rule)) continue;
          (t.status == tickets::TicketStatus::Open ? open : resolved)++;
          list.push_back({{"id", t.id},
                          {"rule", t.rule},
                          {"status", std::string(tickets::to_string(t.status))},
                          {"start", t.interval.start.iso()},
                          {"end", t.interval.end.iso()},
                          {"samples", t.interval.samples}});
        }
      }
      return {{"open", open}, {"resolved", resolved}, {"tickets", std::move(list)}};
    }
    case SectionKind::FulfillmentTable: {
      std::vector<std::string> names = s.names;
      if (names.empty() && in.results && in.spec) {
        for (const auto& a : in.spec->artifacts) {
          if (std::holds_alternative<lang::RuleDef>(a) && in.results->artifacts.count(lang::name_of(a))) {
            names.push_back(lang::name_of(a));
          }
        }
      }
      const lang::TimeRoutineDef* routine = nullptr;
      if (!s.filter.empty()) {
        const auto* def = in.spec ? in.spec->find(s.filter) : nullptr;
        routine = def ? std::get_if<lang::TimeRoutineDef>(def) : nullptr;
        if (!routine) throw RenderError(s.id, "unknown time routine '" + s.filter + "'");
      }
      json rows = json::array();
      for (const auto& n : names) {
        const auto* vs = in.results ? in.results->virtual_sensor(n) : nullptr;
        if (!vs || vs->series.kind() != SeriesKind::Logic) throw RenderError(s.id, "unknown rule '" + n + "'");
        auto score = routine ? eval::fulfillment_ratio(*vs, *routine, *in.spec) : eval::fulfillment_ratio(*vs);
        rows.push_back({{"rule", n},
                        {"ratio", ratio_json(score.ratio)},
                        {"true", score.n_true},
                        {"false", score.n_false},
                        {"missing", score.n_missing},
                        {"undefined", score.n_undefined}});
      }
      json j = {{"rows", std::move(rows)}};
      if (routine) j["filter"] = s.filter;
      return j;
    }
    case SectionKind::Text: return {{"text", s.text}};
  }
  return json::object();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string cell(const json& v) { return escape(v.is_string() ? v.get<std::string>() : v.dump()); }

std::string table(const std::vector<std::string>& head, const json& rows, const std::vector<std::string>& keys) {
  std::string out = "<table>\n<tr>";
  for (const auto& h : head) out += "<th>" + escape(h) + "</th>";
  out += "</tr>\n";
  for (const auto& r : rows) {
    out += "<tr>";
    for (const auto& k : keys) out += "<td>" + cell(r.at(k)) + "</td>";
    out += "</tr>\n";
  }
  return out + "</table>\n";
}

std::string section_body(const RenderedSection& s) {
  json c = json::parse(s.content);
  switch (s.kind) {
    case SectionKind::Plot: {
      std::string data = c.dump();
      for (std::size_t p = data.find("</"); p != std::string::npos; p = data.find("</", p + 3)) data.replace(p, 2, "<\\/");
      return "<script type=\"application/json\" class=\"plot-data\">" + data + "</script>\n";
    }
    case SectionKind::MetricTable: {
      std::string out;
      for (const auto& m : c.at("metrics")) {
        out += "<h3>" + cell(m.at("name")) + " (" + cell(m.at("filter")) + ")</h3>\n";
        out += table({"start", "value", "coverage"}, m.at("rows"), {"start", "value", "coverage"});
      }
      return out;
    }
    case SectionKind::TicketSummary:
      return "<p>" + c.at("open").dump() + " open, " + c.at("resolved").dump() + " resolved</p>\n" +
             table({"id", "rule", "status", "start", "end", "samples"}, c.at("tickets"),
                   {"id", "rule", "status", "start", "end", "samples"});
    case SectionKind::FulfillmentTable:
      return table({"rule", "ratio", "true", "false", "missing", "undefined"}, c.at("rows"),
                   {"rule", "ratio", "true", "false", "missing", "undefined"});
    case SectionKind::Text: return "<p>" + cell(c.at("text")) + "</p>\n";
  }
  return {};
}

json span_json(const std::optional<TimeGrid>& g) {
  if (!g) return nullptr;
  return {{"start", g->start.iso()}, {"end", g->end().iso()}, {"step", g->step}, {"count", g->count}};
}

}  // namespace

std::string plot_to_json(const PlotData& p) { return plot_json(p).dump(2) + "\n"; }

ReportDocument render_report(const ReportTemplate& tmpl, const ReportInputs& inputs, const CommentStore& comments,
                             Timestamp generated_at) {
  ReportDocument doc{tmpl.id, tmpl.title, generated_at, inputs.grid, {}};
  for (const auto& s : tmpl.sections) {
    doc.sections.push_back(RenderedSection{s.id, s.title, s.kind, section_content(s, inputs).dump(), comments.comments(s.id)});
  }
  return doc;
}

std::string ReportDocument::json() const {
  io::json sections = io::json::array();
  for (const auto& s : this->sections) {
    io::json cs = io::json::array();
    for (const auto& c : s.comments) cs.push_back(comment_json(c));
    sections.push_back({{"id", s.id},
                        {"title", s.title},
                        {"kind", std::string(to_string(s.kind))},
                        {"content", io::json::parse(s.content)},
                        {"comments", std::move(cs)}});
  }
  io::json j = {{"template", template_id},
                {"title", title},
                {"generated_at", generated_at.iso()},
                {"data_span", span_json(data_span)},
                {"sections", std::move(sections)}};
  return j.dump(2) + "\n";
}

std::string ReportDocument::html() const {
  std::string out = "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>" + escape(title) +
                    "</title>\n</head>\n<body>\n<h1>" + escape(title) + "</h1>\n";
  out += "<p class=\"meta\">generated " + generated_at.iso();
  if (data_span) out += ", data " + data_span->start.iso() + " to " + data_span->end().iso();
  out += "</p>\n";
  for (const auto& s : sections) {
    out += "<section id=\"" + escape(s.id) + "\" class=\"" + std::string(to_string(s.kind)) + "\">\n";
    out += "<h2>" + escape(s.title) + "</h2>\n" + section_body(s);
    if (!s.comments.empty()) {
      out += "<div class=\"comments\">\n";
      for (const auto& c : s.comments) {
        out += "<blockquote><p>" + escape(c.text) + "</p><footer>" + escape(c.author) + ", " + c.time.iso() +
               "</footer></blockquote>\n";
      }
      out += "</div>\n";
    }
    out += "</section>\n";
  }
  return out + "</body>\n</html>\n";
}

}  // namespace envnav::report
