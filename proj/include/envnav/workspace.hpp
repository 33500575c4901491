// File-based workspace: import, pipeline runs, result storage and export.
//
// Layout under the root directory:
//   spec/*.nav            specification sources
//   data/<id>.csv         imported raw series, data/sensors.json catalog
//   results/              one CSV per virtual sensor, manifest.json
//   tickets/tickets.json  ticket store
//   reports/templates/    report templates (*.json); rendered reports beside
//   comments.json         report comments
//   workspace.cfg         run configuration (JSON)

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "envnav/error.hpp"
#include "envnav/eval/engine.hpp"
#include "envnav/lang/diagnostic.hpp"
#include "envnav/report.hpp"
#include "envnav/tickets.hpp"
#include "envnav/timeseries.hpp"

namespace envnav::workspace {

namespace fs = std::filesystem;

class Workspace {
 public:
  explicit Workspace(fs::path root) : root_(std::move(root)) {}

  // Creates any missing directories of the layout.
  static Workspace create(const fs::path& root);

  const fs::path& root() const { return root_; }
  fs::path spec_dir() const { return root_ / "spec"; }
  fs::path data_dir() const { return root_ / "data"; }
  fs::path results_dir() const { return root_ / "results"; }
  fs::path tickets_dir() const { return root_ / "tickets"; }
  fs::path reports_dir() const { return root_ / "reports"; }
  fs::path templates_dir() const { return reports_dir() / "templates"; }
  fs::path config_path() const { return root_ / "workspace.cfg"; }
  fs::path comments_path() const { return root_ / "comments.json"; }
  fs::path tickets_path() const { return tickets_dir() / "tickets.json"; }
  fs::path catalog_path() const { return data_dir() / "sensors.json"; }

  std::vector<SensorMeta> catalog() const;
  std::vector<RawPoint> raw_series(const std::string& sensor) const;

 private:
  fs::path root_;
};

// Advisory lock held for the lifetime of the object. Throws IoError when the
// workspace is already locked.
class WorkspaceLock {
 public:
  explicit WorkspaceLock(const Workspace& ws);
  ~WorkspaceLock();
  WorkspaceLock(const WorkspaceLock&) = delete;
  WorkspaceLock& operator=(const WorkspaceLock&) = delete;

 private:
  fs::path path_;
};

std::string read_file(const fs::path& p);
// Writes through a temporary file and renames it into place.
void write_file(const fs::path& p, const std::string& content);

// Current local wall-clock time, truncated to seconds.
Timestamp now_local();

enum class DecimalSeparator : std::uint8_t { Point, Comma };

struct ImportMapping {
  fs::path source;
  std::string time_column = "time";
  std::string value_column = "value";
  std::string sensor;
  SeriesKind kind = SeriesKind::Numeric;
  std::string label;
  std::string unit;
  char delimiter = ',';
  DecimalSeparator decimal = DecimalSeparator::Point;
  std::string time_format = "%Y-%m-%dT%H:%M:%S";
  bool overwrite = false;
};

struct RejectedRow {
  std::size_t line = 0;  // 1-based line in the source file
  std::string reason;
};

struct ImportSummary {
  std::string sensor;
  std::size_t rows = 0;
  std::size_t imported = 0;
  std::vector<RejectedRow> rejected;
  std::optional<Timestamp> first;
  std::optional<Timestamp> last;
  std::vector<std::string> warnings;
};

// Throws Error for unknown columns, an invalid sensor id, or an existing
// sensor without `overwrite`; IoError when the source cannot be read.
ImportSummary import_csv(const Workspace& ws, const ImportMapping& m);

struct PreprocessToggles {
  bool outliers = false;
  bool interpolate = true;
};

struct RunConfig {
  std::optional<Seconds> step;  // default: the spec's step, else 900
  std::optional<Timestamp> start;
  std::optional<Timestamp> end;  // exclusive
  PreprocessConfig preprocess;
  PreprocessToggles toggles;
  tickets::TicketConfig tickets;
  std::vector<std::string> reports;  // template ids; empty = all
  std::optional<Timestamp> run_time;  // pinned clock for reproducible runs
  kernels::Backend backend = kernels::Backend::OpenMP;
  bool keep_subexpressions = true;
};

// Missing keys keep their defaults. Throws Error on malformed input.
RunConfig config_from_json(const std::string& text);
std::string config_to_json(const RunConfig& cfg);
// workspace.cfg if present, else defaults.
RunConfig load_config(const Workspace& ws);

enum class RunStatus : std::uint8_t { Ok = 0, ValidationFailed = 1, IoFailed = 2, Partial = 3 };

struct RunSummary {
  RunStatus status = RunStatus::Ok;
  lang::Diagnostics diagnostics;
  std::optional<TimeGrid> grid;
  std::size_t artifact_count = 0;
  std::map<std::string, std::string> skipped;
  std::map<std::string, std::size_t> violations;  // rule -> violation intervals
  std::vector<eval::FulfillmentScore> fulfillment;
  std::size_t open_tickets = 0;
  std::size_t resolved_tickets = 0;
  std::vector<std::string> reports;
};

struct LoadedSpec {
  lang::Specification spec;  // merged, instances expanded
  lang::Diagnostics diagnostics;
  bool ok() const { return !lang::has_errors(diagnostics); }
};

// Parses spec/*.nav in name order, validates against the catalog and expands
// template instances.
LoadedSpec load_spec(const Workspace& ws);

// Preprocessed series of every catalog sensor with data, on `grid`.
eval::SensorData prepare_data(const Workspace& ws, const TimeGrid& grid, const RunConfig& cfg);

// Grid spanning all imported data unless the config pins start/end.
std::optional<TimeGrid> derive_grid(const Workspace& ws, Seconds step, const RunConfig& cfg);

// Validation errors leave every output untouched.
RunSummary run_pipeline(const Workspace& ws, const RunConfig& cfg);

struct StoredResults {
  TimeGrid grid;
  std::map<std::string, std::string> kinds;  // name -> sensor|rule|function|...|subexpression
  std::map<std::string, TimeSeries> series;
  std::map<std::string, eval::MetricResult> metrics;
  std::map<std::string, std::string> skipped;

  std::vector<std::string> names() const;
  // Rebuilds an evaluation output (sensor series excluded) for rendering.
  eval::EvalOutput as_eval_output() const;
  eval::SensorData sensors() const;
};

// Throws IoError when no run has been stored.
StoredResults load_results(const Workspace& ws);

// Renders the selected (or all) templates from stored results.
std::vector<std::string> render_reports(const Workspace& ws, const StoredResults& results,
                                        const lang::Specification& spec, const std::vector<std::string>& selection,
                                        Timestamp generated_at);

enum class ExportFormat : std::uint8_t { Tabular, Structured };

// Tabular: CSV, one row per timestamp, one column per name. Structured: JSON
// with the same data plus metadata. Throws Error for an empty selection or an
// unknown name; the message lists the available names.
std::string export_results(const StoredResults& results, const std::vector<std::string>& selection,
                           ExportFormat format);

std::string format_number(double v);
std::string format_sample(const NumericSample& s);

}  // namespace envnav::workspace
