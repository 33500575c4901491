// Plot data, report templates, comments and report rendering.

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "envnav/error.hpp"
#include "envnav/eval/engine.hpp"
#include "envnav/tickets.hpp"
#include "envnav/timeseries.hpp"

namespace envnav::report {

enum class PlotKind : std::uint8_t { Line, Scatter, Carpet };
std::string_view to_string(PlotKind k);
std::optional<PlotKind> parse_plot_kind(std::string_view s);

struct LinePoint {
  Timestamp time;
  NumericSample value;
  friend bool operator==(const LinePoint&, const LinePoint&) = default;
};

struct ScatterPoint {
  Timestamp time;
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const ScatterPoint&, const ScatterPoint&) = default;
};

// Rows are calendar days, columns time-of-day slots of one grid step.
struct Carpet {
  std::vector<Timestamp> days;
  std::size_t columns = 0;
  std::vector<std::vector<NumericSample>> cells;
  friend bool operator==(const Carpet&, const Carpet&) = default;
};

struct PlotData {
  PlotKind kind = PlotKind::Line;
  std::vector<std::string> series;
  std::vector<LinePoint> line;
  std::vector<ScatterPoint> scatter;
  Carpet carpet;
  friend bool operator==(const PlotData&, const PlotData&) = default;
};

// Line and carpet take one input, scatter two (x then y) on the same grid.
// Logic input reads true as 1 and false as 0. Throws std::invalid_argument on
// a wrong input count, a grid mismatch, or a step that does not divide a day.
PlotData build_plot_data(PlotKind kind, std::span<const eval::VirtualSensor> inputs);
std::string plot_to_json(const PlotData& p);

enum class SectionKind : std::uint8_t { Plot, MetricTable, TicketSummary, FulfillmentTable, Text };
std::string_view to_string(SectionKind k);

struct Section {
  std::string id;
  std::string title;
  SectionKind kind = SectionKind::Text;
  PlotKind plot = PlotKind::Line;      // Plot
  std::vector<std::string> names;      // series, metrics or rules; empty rules = all
  std::string filter;                  // FulfillmentTable: optional time routine
  std::string text;                    // Text
  friend bool operator==(const Section&, const Section&) = default;
};

struct ReportTemplate {
  std::string id;
  std::string title;
  std::vector<Section> sections;
  friend bool operator==(const ReportTemplate&, const ReportTemplate&) = default;
};

// Throws envnav::Error on malformed input or duplicate section ids.
ReportTemplate template_from_json(const std::string& text);
std::string template_to_json(const ReportTemplate& t);

struct Comment {
  std::string author;
  Timestamp time;
  std::string text;
  friend bool operator==(const Comment&, const Comment&) = default;
};

// Comments keyed by section id; kept apart from any rendered document.
class CommentStore {
 public:
  void add(const std::string& section, Comment c) { by_section_[section].push_back(std::move(c)); }
  const std::vector<Comment>& comments(const std::string& section) const;
  const std::map<std::string, std::vector<Comment>>& all() const { return by_section_; }
  bool empty() const { return by_section_.empty(); }

  std::string to_json() const;
  // Throws envnav::Error on malformed input.
  static CommentStore from_json(const std::string& text);

  friend bool operator==(const CommentStore&, const CommentStore&) = default;

 private:
  std::map<std::string, std::vector<Comment>> by_section_;
};

CommentStore attach_comment(CommentStore store, const std::string& section, const std::string& author,
                            const std::string& text, Timestamp time);

class RenderError : public Error {
 public:
  RenderError(std::string section, const std::string& message)
      : Error("section '" + section + "': " + message), section_(std::move(section)) {}
  const std::string& section() const { return section_; }

 private:
  std::string section_;
};

struct ReportInputs {
  const eval::EvalOutput* results = nullptr;
  const eval::SensorData* sensors = nullptr;            // optional raw series for plots
  const lang::Specification* spec = nullptr;            // needed for routine filters
  const std::vector<tickets::Ticket>* tickets = nullptr;
  std::optional<TimeGrid> grid;                         // data span metadata
};

struct RenderedSection {
  std::string id;
  std::string title;
  SectionKind kind = SectionKind::Text;
  std::string content;  // JSON text of the bound content
  std::vector<Comment> comments;
};

struct ReportDocument {
  std::string template_id;
  std::string title;
  Timestamp generated_at;
  std::optional<TimeGrid> data_span;
  std::vector<RenderedSection> sections;

  std::string html() const;
  std::string json() const;
};

// Throws RenderError naming the first section whose binding does not resolve.
ReportDocument render_report(const ReportTemplate& tmpl, const ReportInputs& inputs, const CommentStore& comments,
                             Timestamp generated_at);

}  // namespace envnav::report
